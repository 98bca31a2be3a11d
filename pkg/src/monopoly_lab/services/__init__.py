# Solver, constructions, bounds, documents and acceptance checks
