# ncphase - Noncommutative Oscillator Entanglement Toolkit

import sys
from typing import Optional

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_CONFIG = 2
EXIT_ANALYSIS = 3
EXIT_INTEGRATION = 4


def emit(text: str, out_path: Optional[str] = None):
    """Send command output to stdout unless it was already written to out_path"""
    if not out_path:
        sys.stdout.write(text)
