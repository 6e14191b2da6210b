"""Critical ideals of signed multidigraphs and their twin blowups."""

__version__ = "0.1.0"
