#!/usr/bin/env python3
"""Regenerate models/university_kb.json from the mechanism definitions below."""

from pathlib import Path

from causal_loom.core import Manipulativity, VariableAttributes
from causal_loom.dsl import parse_equation_line
from causal_loom.kb import Mechanism, empty_kb, kb_put, kb_save

TRULY_EXOGENOUS = VariableAttributes(manipulativity=Manipulativity.TRULY_EXOGENOUS)
TRULY_ENDOGENOUS = VariableAttributes(manipulativity=Manipulativity.TRULY_ENDOGENOUS)

MECHANISMS = [
    (
        "university/enrollment",
        "f1: NS = 22102",
        "Number of students currently enrolled.",
        {},
    ),
    (
        "university/enrollment",
        "f2: NF = 3006",
        "Number of faculty on payroll.",
        {},
    ),
    (
        "university/teaching",
        "f3: SFR = NS / NF",
        "Student-faculty ratio.",
        {},
    ),
    (
        "university/teaching",
        "f7: CS = (NS * CL) / (NF * TL)",
        "Average class size from enrollment, class load, and teaching load.",
        {},
    ),
    (
        "university/teaching",
        "f8: CL = 15",
        "Class load: classes taken per student per year.",
        {},
    ),
    (
        "university/teaching",
        "f9: TL = 6",
        "Teaching load: classes taught per faculty member per year.",
        {},
    ),
    (
        "university/finance",
        "f10: FS = (OI + TA * NS) / (NF * (1 + O))",
        "Average faculty salary from tuition, other income, and overhead.",
        {
            "FS": TRULY_ENDOGENOUS,
            "TA": VariableAttributes(manipulation_cost=1000),
        },
    ),
    (
        "university/finance",
        "f11: TA = 1200",
        "Tuition amount per class.",
        {},
    ),
    (
        "university/finance",
        "f12: O = 0.48",
        "Overhead rate on faculty salary.",
        {"O": TRULY_EXOGENOUS},
    ),
    (
        "university/finance",
        "f13: OI = 30000000",
        "Income other than tuition.",
        {},
    ),
    (
        "university/policy",
        "f14: CS = 15",
        "Target class size of fifteen students.",
        {},
    ),
]


def build_kb():
    kb = empty_kb()
    for folder, equation, description, attributes in MECHANISMS:
        mechanism = Mechanism(
            equation=parse_equation_line(equation),
            attributes=attributes,
            description=description,
        )
        kb = kb_put(kb, folder, mechanism)
    return kb


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "models" / "university_kb.json"
    out.write_bytes(kb_save(build_kb()))
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
