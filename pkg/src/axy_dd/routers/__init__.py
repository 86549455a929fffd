from .root_router import RootRouter

__all__ = [
    "RootRouter",
]
