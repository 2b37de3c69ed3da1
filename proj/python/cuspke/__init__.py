from ._cuspke import *  # noqa: F401,F403
from ._cuspke import ConfigError, CuspModel, NumericalError  # noqa: F401
