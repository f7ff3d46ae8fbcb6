"""core package (numeric domain: lattice, identities, functional relations, Bethe equations)."""
API_VERSION = "core-v1-20261017"
