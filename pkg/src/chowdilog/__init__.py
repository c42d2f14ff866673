"""Additive dilogarithms, infinitesimal regulators and residues over k[t]/(t^m)."""
