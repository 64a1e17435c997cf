"""Brown-energy-minimizing VoD delivery from cloud and solar/battery fog data centres."""

__version__ = "0.1.0"
