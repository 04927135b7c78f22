from .mining import DatasetRequestSchema, MineRequestSchema

__all__ = ["DatasetRequestSchema", "MineRequestSchema"]
