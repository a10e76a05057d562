"""
Console reporting helpers.
Tagged, coloured lines in the style used across the command-line tools.
"""

from colorama import Fore, Style

_verbose = False


def set_verbose(enabled: bool) -> None:
    """Enable or disable [LOG] lines."""
    global _verbose
    _verbose = bool(enabled)


def is_verbose() -> bool:
    return _verbose


def info(message: str) -> None:
    print(Fore.LIGHTCYAN_EX + f"[INFO] {message}" + Style.RESET_ALL)


def success(message: str) -> None:
    print(Fore.LIGHTGREEN_EX + f"[OK] {message}" + Style.RESET_ALL)


def warn(message: str) -> None:
    print(Fore.LIGHTYELLOW_EX + f"[WARN] {message}" + Style.RESET_ALL)


def error(message: str) -> None:
    print(Fore.LIGHTRED_EX + f"[ERROR] {message}" + Style.RESET_ALL)


def log(message: str) -> None:
    """Diagnostic line, printed only in verbose mode."""
    if _verbose:
        print(Fore.LIGHTBLACK_EX + f"[LOG] {message}" + Style.RESET_ALL)
