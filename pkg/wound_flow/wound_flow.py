import argparse
import logging
from fractions import Fraction
from pathlib import Path
from time import strftime

from wound_flow.cli import COMMANDS, Config, emit, emit_error
from wound_flow.cli.config import DEFAULT_HEIGHT, PRECISION_ENV
from wound_flow.errors import ParameterError, WoundError


class WoundFlow:
    """Command-line front end: parses the flags, configures logging and runs one command."""

    def __init__(self, args: list[str] | None = None) -> None:
        parser = self.create_parser()
        self.args = parser.parse_args(args)

        handlers = [logging.StreamHandler()]  # stderr, stdout carries the report
        if self.args.log_file:
            log_file_path = Path(self.args.log_file)
            if not log_file_path.parent.exists():
                log_file_path.parent.mkdir(parents=True, exist_ok=True)
            if log_file_path.exists():
                logging.getLogger().warning(f"A file with this name {self.args.log_file} already exists. "
                                            "The old file has been renamed with a timestamp.")
                log_file_path.rename(log_file_path.with_stem(f'{log_file_path.stem}_{strftime("%Y-%m-%d_%H-%M-%S")}'))
            handlers.append(logging.FileHandler(self.args.log_file))

        # configure root logger
        logging.basicConfig(
            level=getattr(logging, self.args.log_level),
            format="[%(asctime)s] [%(threadName)s] [%(levelname)s] %(message)s",
            handlers=handlers,
            force=True
        )

    def __del__(self) -> None:
        logging.getLogger().handlers = []  # release all root logger handlers

    def run(self) -> int:
        """Run the selected command and return its exit code: 0 success, 1 computation error, 2 usage error."""
        fmt = self.args.format
        try:
            config = Config.from_args(self.args)
            logging.info(f"Running {self.args.command} with {config.render()}.")
            payload, lines, code = COMMANDS[self.args.command](self.args, config)
        except ParameterError as e:
            logging.error(f"Invalid parameters: {e}")
            emit_error(e, fmt, 2)
            return 2
        except WoundError as e:
            logging.error(f"Computation failed: {e}")
            emit_error(e, fmt, 1)
            return 1
        except Exception as e:
            logging.exception(f"Unexpected failure in {self.args.command}: {e}")
            emit_error(e, fmt, 1)
            return 1
        emit(payload, lines, fmt)
        return code

    @staticmethod
    def create_parser() -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)

        # field and parameter
        common.add_argument('--p', type=int, default=3, help='Characteristic p, defaults to 3')
        common.add_argument('--q', type=int, default=9, help='Size q = p^m of the constant field, defaults to 9')
        common.add_argument('--a', type=str, default='T*(T-1)',
                            help='Parameter a in F_q(T), not a pth power. Use T for the variable and z for the '
                                 'generator of F_q over F_p, defaults to "T*(T-1)"')

        # computation
        common.add_argument('--precision', type=int, default=None,
                            help=f'Working precision of local expansions, defaults to ${PRECISION_ENV} or 12')
        common.add_argument('--height', type=int, default=DEFAULT_HEIGHT,
                            help=f'Height bound for brute-force and global-lift searches, defaults to {DEFAULT_HEIGHT}')
        common.add_argument('--threads', type=int, default=1,
                            help='Worker threads for enumerations and per-place searches, defaults to 1')

        # output and logging
        common.add_argument('--format', type=str, default='text', choices=['json', 'text'],
                            help='Report format on stdout, defaults to text')
        common.add_argument('--log-file', type=str, default=None, required=False,
                            help="The file name where wound-flow will write its logs to. "
                                 "If a relative path is given it is relative to the current working directory.")
        common.add_argument('--log-level', type=str, default='WARNING',
                            choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Log level, defaults to WARNING')

        window = argparse.ArgumentParser(add_help=False)
        window.add_argument('--window-low', type=int, default=None, help='Lowest tail index of the local window')
        window.add_argument('--window-high', type=int, default=None, help='Highest tail index of the local window')

        parser = argparse.ArgumentParser("wound-flow")
        commands = parser.add_subparsers(dest='command', required=True)

        tamagawa = commands.add_parser('tamagawa', parents=[common], help='Tamagawa number of W_a')
        tamagawa.add_argument('--counterexample', action='store_true',
                              help='Also report the discrepancy factor for the extension U_a')

        points = commands.add_parser('points', parents=[common], help='Rational points of V_a or W_a')
        points.add_argument('--kind', type=str, default='W', choices=['V', 'W'], help='Group, defaults to W')
        points.add_argument('--brute-force', action='store_true',
                            help='Scan all coordinates up to --height instead of using the pole bound')

        delta = commands.add_parser('delta', parents=[common], help='Connecting map delta_beta(c, d)')
        delta.add_argument('--beta', type=str, required=True, help='Twisting parameter beta in F_q(T)')
        delta.add_argument('--c', type=str, required=True, help='x-coordinate of the point of V_a')
        delta.add_argument('--d', type=str, required=True, help='y-coordinate of the point of V_a')
        delta.add_argument('--kind', type=str, default=None, choices=['U', 'Uzeta', 'Udescended'],
                           help='Extension, defaults to U for p > 2 and the F_4 case otherwise')
        delta.add_argument('--generic', action='store_true',
                           help='Also evaluate through the etale algebra and compare')

        local_image = commands.add_parser('local-image', parents=[common, window],
                                          help='Decide lambda in g(k_v^2) at one place')
        local_image.add_argument('--place', type=str, required=True, help='Place: a monic irreducible polynomial or inf')
        local_image.add_argument('--lam', type=str, default=None,
                                 help='Element of F_q(T); a certified nontrivial class is searched when omitted')
        local_image.add_argument('--map', type=str, default='g', choices=['f', 'g', 'gplus'],
                                 help='Additive map: f of V_a, g of W_a or g+ of W_a^+, defaults to g')

        local_witness = commands.add_parser('local-witness', parents=[common, window],
                                            help='Adelic class of W_a nontrivial at one place')
        local_witness.add_argument('--place', type=str, required=True, help='Place: a monic irreducible polynomial or inf')
        local_witness.add_argument('--plus', action='store_true', help='Use W_a^+ instead of W_a')

        solve_v = commands.add_parser('solve-v', parents=[common, window], help='Solve f(x, y) = lambda in F_q(T)')
        solve_v.add_argument('--lam', type=str, required=True, help='Right-hand side lambda')

        twist = commands.add_parser('twist-search', parents=[common, window],
                                    help='Find beta obstructing U_beta at the given places')
        twist.add_argument('--places', type=str, default=None, help='Comma separated places, e.g. "T,T-1,inf"')
        twist.add_argument('--epsilon', type=Fraction, default=None,
                           help='Use the first places needed to push the bound below epsilon')
        twist.add_argument('--kind', type=str, default=None, choices=['U', 'Uzeta', 'Udescended'],
                           help='Extension, defaults to U for p > 2 and the F_4 case otherwise')
        twist.add_argument('--output', type=str, default=None, help='Write the certificate JSON to this file')

        verify = commands.add_parser('verify', parents=[common], help='Re-check a twist certificate')
        verify.add_argument('file', type=str, help='Certificate JSON written by twist-search')
        return parser
