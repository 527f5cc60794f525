"""Spectral Turan toolkit for trees -- profiles, witnesses, embeddings and spex bounds."""
__version__ = "0.1.0"
