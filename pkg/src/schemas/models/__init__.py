# Lattice model schemas
