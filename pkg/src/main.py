"""
Main entry point for carveorder.
Shows the banner and hands the command line to the console UI.
"""

import sys
from typing import List, Optional

from colorama import Fore, Style

from .ui.console_ui import ConsoleUI


def print_banner():
    """Display the application banner."""
    banner = r"""
   ___ __ _ _ ____   _____  ___  _ __ __| | ___ _ __
  / __/ _` | '__\ \ / / _ \/ _ \| '__/ _` |/ _ \ '__|
 | (_| (_| | |   \ V /  __/ (_) | | | (_| |  __/ |
  \___\__,_|_|    \_/ \___|\___/|_|  \__,_|\___|_|
        Carving-width contraction orders
    """
    print(Fore.LIGHTMAGENTA_EX + banner + Style.RESET_ALL)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    argv = sys.argv[1:] if argv is None else argv
    ui = ConsoleUI()
    if not argv:
        print_banner()
        ui.display_help()
        return 0
    return ui.run(argv)


if __name__ == "__main__":
    sys.exit(main())
