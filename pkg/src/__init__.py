"""amdiqkd - Secret key rates of adaptive MDI-QKD with QND-heralded photons."""

__version__ = "0.1.0"
