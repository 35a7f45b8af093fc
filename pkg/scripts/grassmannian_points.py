"""Run the four subspace checks on the vacuum, a Gaussian point and the descendant wave.

    python3 scripts/grassmannian_points.py
"""

from __future__ import annotations

import warnings

from twobkp.descendant import expand_wave
from twobkp.gaussian import DeformationPoint, assemble, direct_wave
from twobkp.grassmannian import span_from_wave, subspace_checks, vacuum_wave


def main():
    model = assemble(DeformationPoint.parse(3, "1,0,0"), 12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        descendant = expand_wave(4, 40, 8)
    for label, wave in (("vacuum N=3", vacuum_wave(3, 5)), ("gaussian N=3 t=(1,0,0)", direct_wave(model, 4)),
                        ("descendant N=4", descendant)):
        rep = subspace_checks(span_from_wave(wave))
        print(label)
        print(rep.to_text())


if __name__ == "__main__":
    main()
