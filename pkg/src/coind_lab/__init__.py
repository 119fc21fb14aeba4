__all__ = [
    "groups",
    "filtration",
    "action",
    "coinduction",
    "topology",
    "top_coinduction",
    "verify",
]

__version__ = "0.1.0"
