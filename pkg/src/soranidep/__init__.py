"""Depression-signal classification for Sorani Kurdish social-media posts."""

__version__ = "0.1.0"
