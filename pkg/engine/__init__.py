"""engine package

Orchestrates runs using:
- core/ for the numeric domain (lattice, identities, spectra, Bethe roots)
- a tolerant config layer, a result cache and JSON/CSV report export
"""
