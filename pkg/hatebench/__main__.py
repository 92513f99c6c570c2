from __future__ import annotations

from hatebench.cli import main

main()
