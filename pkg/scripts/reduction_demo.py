#!/usr/bin/env python3
"""Generate the three reduction families for a tiny input each, solve
them, and decode the controllers back to Boolean assignments.

Usage: python scripts/reduction_demo.py [out_dir]
"""

import sys
from pathlib import Path

from hypersynth.formula import Quantifier
from hypersynth.parser import print_formula
from hypersynth.plant import dump_plant
from hypersynth.reductions import (
    CnfInput,
    QbfInput,
    decode_assignment,
    horn_to_instance,
    normalize_horn,
    qbf_to_instance,
    threesat_to_instance,
)
from hypersynth.synth import dispatch

E, A = Quantifier.EXISTS, Quantifier.FORALL


def run(name, inst, out_dir):
    result = dispatch(inst.plant, inst.formula)
    print(f"{name}: {len(inst.plant.states)} states, "
          f"formula {print_formula(inst.formula)}")
    print(f"  verdict: {result.verdict.value}")
    if result.realizable:
        print(f"  decoded: {decode_assignment(inst, result.solution)}")
    if out_dir is not None:
        (out_dir / f"{name}.plant.json").write_text(dump_plant(inst.plant))
        (out_dir / f"{name}.formula.hltl").write_text(
            print_formula(inst.formula) + "\n"
        )


def main() -> int:
    out_dir = None
    if len(sys.argv) > 1:
        out_dir = Path(sys.argv[1])
        out_dir.mkdir(parents=True, exist_ok=True)
    horn = normalize_horn(
        CnfInput(4, ((-1, -2, -3, 4), (-2, 4), (-1,)))
    )
    run("horn", horn_to_instance(horn), out_dir)
    run("3sat", threesat_to_instance(CnfInput(4, ((-1, -2, 3), (1, 2, -4)))), out_dir)
    qbf = QbfInput(
        prefix=((E, 1), (A, 2), (E, 3)),
        clauses=((1, -2, 3), (-1, 2, -3)),
    )
    run("qbf", qbf_to_instance(qbf), out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
