"""Dense distributions, Fourier tools and inequality verifiers."""
from .dense import *  # noqa: F401,F403
from .dense import __all__ as _dense_all
from .fourier import *  # noqa: F401,F403
from .fourier import __all__ as _fourier_all
from .rectangles import *  # noqa: F401,F403
from .rectangles import __all__ as _rect_all
from .suites import *  # noqa: F401,F403
from .suites import __all__ as _suite_all
from .verifiers import *  # noqa: F401,F403
from .verifiers import __all__ as _ver_all

__all__ = _dense_all + _fourier_all + _rect_all + _ver_all + _suite_all
