try:
    from ._kellybet import *  # noqa: F401,F403
    from ._kellybet import __doc__  # noqa: F401
except ImportError:
    from _kellybet import *  # noqa: F401,F403
    from _kellybet import __doc__  # noqa: F401

__version__ = "0.1.0"
