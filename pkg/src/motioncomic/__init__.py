"""motioncomic: compile narrative text into deterministic 2D motion comics."""

__version__ = "0.1.0"
