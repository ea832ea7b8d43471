"""Regenerate tests/fixtures/layout_fixtures.json from the reference
geometry in harpkit.labels, so the TypeScript layout stays pinned to it."""

import json
import random
from pathlib import Path

from harpkit import labels as labels_mod

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "layout_fixtures.json"


def main() -> None:
    rng = random.Random(20260825)
    cases = []
    for _ in range(200):
        mode = rng.choice(["waveform", "pianoroll"])
        vp_kwargs = dict(
            start_s=round(rng.uniform(0, 30), 3),
            duration_s=round(rng.uniform(0.5, 60), 3),
            width_px=rng.randrange(100, 2000),
            height_px=rng.randrange(50, 600),
            mode=mode,
        )
        if mode == "pianoroll":
            lo = rng.randrange(0, 100)
            vp_kwargs["pitch_min"] = lo
            vp_kwargs["pitch_max"] = rng.randrange(lo, 128)
        vp = labels_mod.Viewport(**vp_kwargs)
        label = labels_mod.Label(
            t=round(rng.uniform(0, 90), 3),
            text="fixture",
            duration=round(rng.uniform(0, 5), 3) if rng.random() < 0.5 else None,
            amplitude=round(rng.uniform(-1, 1), 3) if rng.random() < 0.5 else None,
            pitch=rng.randrange(0, 128) if rng.random() < 0.5 else None,
        )
        geo = labels_mod.layout_label(label, vp)
        cases.append(
            {
                "label": labels_mod.serialize_labels((label,))[0],
                "viewport": vp_kwargs,
                "expected": {
                    "x_px": geo.x_px,
                    "width_px": geo.width_px,
                    "y_px": geo.y_px,
                    "visible": geo.visible,
                },
            }
        )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(cases, indent=1))
    print(f"wrote {len(cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
