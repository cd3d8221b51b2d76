# lattice-ist
