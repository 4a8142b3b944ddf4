"""Traffic-driven growth model of the WWW graph: simulator and analysis toolkit."""

__version__ = "1.0.0"
