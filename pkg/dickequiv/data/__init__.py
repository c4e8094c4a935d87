"""Init file for data directory."""
DATA_PATH = __path__[0]
