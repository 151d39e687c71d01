from .app import entry_point as cli  # noqa: F401
from .app import run_command as run_command  # noqa: F401
