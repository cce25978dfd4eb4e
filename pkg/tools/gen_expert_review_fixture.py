#!/usr/bin/env python3
"""Generate the bundled 68-scheme expert review fixture.

The two curators' scores are synthesized so that the catalog realises
exactly 16 exact / 33 similar / 19 disagree score pairs (adjacent scores
on the 0 ? 1 2 3 scale count as similar).  Output is deterministic.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "src" / "argudas" / "data" / "expert_review_scores.json"

EXACT_PAIRS = [("3", "3"), ("2", "2"), ("1", "1"), ("0", "0"), ("?", "?")]
SIMILAR_PAIRS = [("2", "3"), ("1", "2"), ("3", "2"), ("?", "1"), ("0", "?"), ("2", "1"), ("1", "?")]
DISAGREE_PAIRS = [("0", "2"), ("3", "1"), ("0", "3"), ("1", "3"), ("?", "2"), ("3", "0"), ("2", "0"), ("?", "3")]

PREMISES = [
    ("the annotation records a positive expression level",
     [{"field": "level", "op": "presence_is", "value": True}], "supports_expression"),
    ("the annotation records that no expression was detected",
     [{"field": "level", "op": "presence_is", "value": False}], "opposes_expression"),
    ("the probe used in the experiment is documented",
     [{"field": "probe_info", "op": "equals", "value": True}], "strengthens_annotation"),
    ("no probe information is recorded for the experiment",
     [{"field": "probe_info", "op": "is_absent"}], "weakens_annotation"),
    ("the experimental technique is recorded",
     [{"field": "technique", "op": "is_set"}], "strengthens_annotation"),
    ("the technique field was left empty by the submitter",
     [{"field": "technique", "op": "is_absent"}], "weakens_annotation"),
    ("the assertion was made directly for this tissue",
     [{"field": "direct", "op": "equals", "value": True}], "strengthens_annotation"),
    ("the assertion was derived by propagation from a part",
     [{"field": "direct", "op": "equals", "value": False}], "weakens_annotation"),
    ("a link back to the source record is available",
     [{"field": "source_url", "op": "is_set"}], "strengthens_annotation"),
    ("no link back to the source record is available",
     [{"field": "source_url", "op": "is_absent"}], "weakens_annotation"),
    ("anatomy alignment lost precision for this record",
     [{"field": "precision_loss", "op": "equals", "value": True}], "weakens_annotation"),
    ("the anatomy term mapped without loss of precision",
     [{"field": "precision_loss", "op": "equals", "value": False}], "strengthens_annotation"),
    ("a strong signal is reported",
     [{"field": "level", "op": "equals", "value": "strong"}], "supports_expression"),
    ("only a weak signal is reported",
     [{"field": "level", "op": "equals", "value": "weak"}], "supports_expression"),
    ("the record comes from a curated developmental atlas",
     [{"field": "resource", "op": "equals", "value": "EMAGE"}], "strengthens_annotation"),
    ("the record was produced by an automated adult-brain pipeline",
     [{"field": "resource", "op": "equals", "value": "ABA"}], "weakens_annotation"),
    ("the record names an informative experimental outcome",
     [{"field": "level", "op": "not_equals", "value": "detected"}], "strengthens_annotation"),
]

CONSEQUENCES = {
    "supports_expression": "that is a reason to believe the gene is expressed in the tissue",
    "opposes_expression": "that is a reason to believe the gene is not expressed in the tissue",
    "strengthens_annotation": "the annotation should be given more weight",
    "weakens_annotation": "the annotation should be given less weight",
}

PROVISOS = [
    "",
    ", provided the underlying image is of usable quality",
    ", unless the experiment targeted a different developmental window",
    ", as long as the tissue boundaries were drawn consistently",
]

QUESTIONS = [
    "Does the underlying experiment really concern this Theiler stage?",
    "Could curator error explain the recorded value?",
    "Is the resource known to be reliable for this class of record?",
    "Would the conclusion survive inspection of the original image?",
]


def main():
    rng = random.Random(20100615)
    classes = ["exact"] * 16 + ["similar"] * 33 + ["disagree"] * 19
    rng.shuffle(classes)
    pools = {"exact": EXACT_PAIRS, "similar": SIMILAR_PAIRS, "disagree": DISAGREE_PAIRS}
    counters = {"exact": 0, "similar": 0, "disagree": 0}

    schemes = []
    for index, cls in enumerate(classes):
        premise, conditions, polarity = PREMISES[index % len(PREMISES)]
        proviso = PROVISOS[(index // len(PREMISES)) % len(PROVISOS)]
        pair = pools[cls][counters[cls] % len(pools[cls])]
        counters[cls] += 1
        number = index + 1
        schemes.append(
            {
                "id": f"review-{number:02d}",
                "description": (
                    f"Review scheme {number:02d}: if {premise}{proviso}, "
                    f"then {CONSEQUENCES[polarity]}."
                ),
                "polarity": polarity,
                "scope": "single",
                "conditions": conditions,
                "critical_questions": [QUESTIONS[index % len(QUESTIONS)]],
                "scores": {"curator_a": pair[0], "curator_b": pair[1]},
            }
        )

    OUT.write_text(json.dumps(schemes, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(schemes)} schemes to {OUT}")


if __name__ == "__main__":
    main()
