from .quiver import QuiverSpec, build_quiver_category
from .stmod import StmodSpec, build_stmod_category, suspend

__all__ = ["QuiverSpec", "StmodSpec", "build_quiver_category", "build_stmod_category", "suspend"]
