"""Home-MEG: Markovian evolving graphs with Home / Non-Home edge locations."""

__version__ = "0.1.0"
