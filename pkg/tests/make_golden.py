"""Regenerate the golden CLI outputs: ``python3 tests/make_golden.py``.

Only rerun after checking that a rendering change is intended.
"""
import io
from pathlib import Path

from weakval.cli import main
from weakval.render import FORMATS
from weakval.scenarios import HARDY_VARIANTS, SPIN_VARIANTS

GOLDEN = Path(__file__).parent / "golden"
EXT = {"text": "txt", "csv": "csv", "json": "json"}


def cases():
    for name, variants in (("hardy", HARDY_VARIANTS), ("spin", SPIN_VARIANTS)):
        for variant in variants:
            for fmt in FORMATS:
                yield f"{name}-{variant}.{EXT[fmt]}", ["scenario", name, "--table", variant, "--format", fmt]
    yield "spin-pauli-split.txt", ["scenario", "spin", "--table", "pauli", "--split"]
    yield "hardy-orthogonal-eta.txt", ["scenario", "hardy", "--coeffs", "0.1,1,1,1"]


def render(argv):
    buf = io.StringIO()
    assert main(argv, out=buf) == 0
    return buf.getvalue()


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for filename, argv in cases():
        (GOLDEN / filename).write_text(render(argv))
        print(filename)
