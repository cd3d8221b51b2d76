# Spectral modules
