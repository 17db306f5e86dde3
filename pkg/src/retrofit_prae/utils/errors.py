"""Base exception shared by every Retrofit PRAE component"""


class RetrofitPraeError(Exception):
    """Base class for all errors raised by retrofit_prae"""

    pass
