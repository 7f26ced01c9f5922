from wound_flow.cli.commands import COMMANDS
from wound_flow.cli.config import DEFAULT_PRECISION, PRECISION_ENV, Config, default_precision, degree_of
from wound_flow.cli.reporting import emit, emit_error, render
