"""Blueprints of the mining service.

common_routes: health and route listing under /api/v1
mining_routes: mining and dataset statistics under /api/v1/mining

create_app imports each blueprint explicitly; nothing is imported here.
"""

__all__ = []
