"""
Permite executar a CLI via `python -m gpdkit`.

Uso:
    python -m gpdkit validate z2.json
    python -m gpdkit equiv z2.json tors2.json --format json
"""

from gpdkit.cli import main

if __name__ == "__main__":
    main()
