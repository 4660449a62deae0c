"""Natural-language geofence alerts over unbalanced 2-tuple linguistic partitions."""

__version__ = "0.1.0"
