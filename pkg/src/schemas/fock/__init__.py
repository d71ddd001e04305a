# Truncated Fock space schemas
