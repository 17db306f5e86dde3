"""Utility modules for Retrofit PRAE"""

from retrofit_prae.utils.config import Settings, get_settings, reset_settings
from retrofit_prae.utils.errors import RetrofitPraeError
from retrofit_prae.utils.logger import setup_logger

__all__ = [
    "Settings",
    "get_settings",
    "reset_settings",
    "RetrofitPraeError",
    "setup_logger",
]
