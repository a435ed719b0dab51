#!/usr/bin/env python3
"""Print the closed-form transcription arbitration report.

The named-family formula table (eq=32..34 moments, eq=35..37 Q functions)
carries a few entries that are internally inconsistent with the operator
definitions; this report evaluates both the tabulated and the corrected
variants against the number-basis reference and states which one the
reference selects.  Exit code 3 if the corrected forms ever disagree with
the reference.
"""

import sys

from catpol.cli import main

if __name__ == "__main__":
    sys.exit(main(["verify", "--only", "arbitration"]))
