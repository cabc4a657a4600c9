"""Regenerate the golden measurement files shipped in src/gsmkit/data/.

Usage: python tools/make_golden.py
"""

from pathlib import Path

from gsmkit import reference as ref
from gsmkit.serialization import dumps, measurement_to_dict

DATA = Path(__file__).resolve().parents[1] / "src" / "gsmkit" / "data"


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    files = {
        "qubit_projective_2_3.json": (ref.qubit_projective_2_3(), 2, {"basis": "explicit"}),
    }
    qt = ref.qutrit_diagonal_povms()
    for name, t, v in (("t_max", ref.QUTRIT_T_MAX, "unprimed:+"),
                       ("t_min", ref.QUTRIT_T_MIN, "unprimed:-"),
                       ("plus_abs_t_min", -ref.QUTRIT_T_MIN, "unprimed:+")):
        files[f"qutrit_diag_{name}.json"] = (
            [qt[name]], 3, {"basis": "qutrit-diagonal-pair", "variants": [v], "t": [t]})
    for key, fam in ref.qubit_sic_families().items():
        primed = key.startswith("primed")
        t = ref.SIC_T_PRIMED if primed else ref.SIC_T
        t = t if key.endswith("+") else -t
        files[f"qubit_sic_{key.replace(':+', '_plus').replace(':-', '_minus')}.json"] = (
            [fam], 2, {"basis": "pauli/sqrt2", "variants": [key], "t": [t]})
    for fname, (blocks, d, prov) in files.items():
        (DATA / fname).write_text(dumps(measurement_to_dict(blocks, d, prov)))
        print("wrote", fname)


if __name__ == "__main__":
    main()
