"""Plain-text rendering of exact values."""


def _needs_parens(s: str) -> bool:
    body = s[1:] if s.startswith("-") else s
    if body.startswith("(") and body.endswith(")"):
        return False
    return any(ch in body for ch in "+- ")


def join_terms(terms) -> str:
    """terms: iterable of (coefficient string, monomial string or '')."""
    out = ""
    for coef, mon in terms:
        if mon:
            if coef == "1":
                piece = mon
            elif coef == "-1":
                piece = "-" + mon
            elif _needs_parens(coef):
                piece = f"({coef})*{mon}"
            else:
                piece = f"{coef}*{mon}"
        else:
            piece = coef
        if not out:
            out = piece
        elif piece.startswith("-") and not piece.startswith("-("):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out or "0"


def power(var: str, k: int) -> str:
    if k == 0:
        return ""
    if k == 1:
        return var
    return f"{var}^{k}"


def fmt_rational(q) -> str:
    return str(q)


def fmt_upoly(coeffs, var: str) -> str:
    """Descending-order rendering of an ascending coefficient list of rationals."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c != 0:
            terms.append((str(c), power(var, k)))
    return join_terms(terms)


def join_forms(terms) -> str:
    """Like join_terms but renders 'f dv' with a space, as forms are usually written."""
    out = ""
    for coef, mon in terms:
        if coef == "1":
            piece = mon
        elif coef == "-1":
            piece = "-" + mon
        elif _needs_parens(coef):
            piece = f"({coef}) {mon}"
        else:
            piece = f"{coef} {mon}"
        if not out:
            out = piece
        elif piece.startswith("-") and not piece.startswith("-("):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out or "0"
