#!/usr/bin/env python3
#
# record_goldens.py
# socnav
#
# Copyright 2026 The socnav Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Records protocol transcripts by piping request scripts through `socnav serve --stdio`.

Transcript lines: "> " request, "! " request that is not a valid message,
"< " response. Regenerate after any change to the engine's numerics:

    tools/record_goldens.py build/socnav tests/golden
"""

import json
import pathlib
import subprocess
import sys


def reset(map_ref="gen:3", seed=11, n_peds=4, mode="uncooperative", planner="ppp"):
    return json.dumps(
        {"type": "reset", "map": map_ref, "seed": seed, "n_peds": n_peds, "mode": mode, "global_planner": planner},
        separators=(",", ":"),
    )


def step(v, w):
    return json.dumps({"type": "step", "action": [v, w]}, separators=(",", ":"))


CLOSE = '{"type":"close"}'

# (name, [(kind, line)]) where kind is ">" or "!".
SCRIPTS = [
    ("01_reset_steps_close", [(">", reset()), (">", step(0.5, 0.0)), (">", step(0.5, 0.25)), (">", step(1.0, -0.5)), (">", CLOSE)]),
    ("02_step_before_reset", [(">", step(0.5, 0.0)), (">", reset()), (">", CLOSE)]),
    ("03_malformed_then_recover", [("!", "{this is not json"), (">", reset(seed=3)), (">", step(0.2, 0.1)), (">", CLOSE)]),
    ("04_invalid_action_range", [(">", reset(seed=4)), (">", step(1.5, 0.0)), (">", step(0.0, -1.01)), (">", step(1.0, -1.0)), (">", CLOSE)]),
    ("05_missing_field", [("!", '{"type":"reset","map":"gen:3","seed":1,"n_peds":2,"mode":"cooperative"}'), (">", CLOSE)]),
    ("06_wrong_field_type", [("!", '{"type":"step","action":"fast"}'), ("!", '{"type":"reset","map":"gen:3","seed":"1","n_peds":2,"mode":"cooperative","global_planner":"ppp"}'), (">", CLOSE)]),
    ("07_unknown_type", [("!", '{"type":"teleport","to":[1,2]}'), ("!", "[1,2,3]"), (">", CLOSE)]),
    ("08_unknown_mode", [("!", '{"type":"reset","map":"gen:3","seed":1,"n_peds":2,"mode":"chaotic","global_planner":"ppp"}'), (">", CLOSE)]),
    ("09_unknown_planner", [("!", '{"type":"reset","map":"gen:3","seed":1,"n_peds":2,"mode":"cooperative","global_planner":"rrt"}'), (">", CLOSE)]),
    ("10_file_map_not_allowed", [(">", reset(map_ref="file:/etc/hostname")), (">", CLOSE)]),
    ("11_invalid_map_ref", [(">", '{"type":"reset","map":"maps/a.pgm","seed":1,"n_peds":2,"mode":"cooperative","global_planner":"ppp"}'), (">", reset(map_ref="gen:")), (">", CLOSE)]),
    ("12_too_many_pedestrians", [(">", reset(n_peds=5000)), (">", step(0.0, 0.0)), (">", CLOSE)]),
    ("13_cooperative_astar", [(">", reset(seed=21, mode="cooperative", planner="astar")), (">", step(0.5, 0.0)), (">", step(0.5, 0.0)), (">", step(0.5, 0.0)), (">", CLOSE)]),
    ("14_fixed_planner", [(">", reset(seed=22, planner="fixed")), (">", step(0.8, 0.3)), (">", step(0.8, 0.3)), (">", step(0.8, 0.3)), (">", CLOSE)]),
    ("15_no_pedestrians", [(">", reset(seed=23, n_peds=0)), (">", step(0.4, 0.0)), (">", step(0.4, 0.0)), (">", CLOSE)]),
    ("16_reset_twice", [(">", reset(seed=24)), (">", step(0.5, 0.5)), (">", reset(seed=24)), (">", step(0.5, 0.5)), (">", CLOSE)]),
    ("17_boundary_actions", [(">", reset(seed=25)), (">", step(1.0, 1.0)), (">", step(-1.0, -1.0)), (">", step(1.0, -1.0)), (">", step(-1.0, 1.0)), (">", CLOSE)]),
    ("18_dense_crowd", [(">", reset(map_ref="gen:7", seed=26, n_peds=10)), (">", step(0.6, 0.0)), (">", step(0.6, 0.0)), (">", CLOSE)]),
    ("19_fractional_actions", [(">", reset(seed=27, mode="cooperative")), (">", step(0.123456789, -0.987654321)), (">", step(1e-7, 0.3333333333333333)), (">", step(0.0, 0.0)), (">", CLOSE)]),
    ("20_other_generated_map", [(">", reset(map_ref="gen:104", seed=28, n_peds=6, planner="astar")), (">", step(0.7, -0.2)), (">", step(0.7, -0.2)), (">", CLOSE)]),
]


def record(binary, name, script):
    stdin = "".join(line + "\n" for _, line in script)
    out = subprocess.run([binary, "serve", "--stdio"], input=stdin, capture_output=True, text=True, check=True)
    responses = out.stdout.splitlines()
    if len(responses) != len(script):
        raise SystemExit(f"{name}: {len(script)} requests but {len(responses)} responses")
    lines = []
    for (kind, req), resp in zip(script, responses):
        lines.append(f"{kind} {req}")
        lines.append(f"< {resp}")
    return "\n".join(lines) + "\n"


def main():
    if len(sys.argv) != 3:
        raise SystemExit("usage: record_goldens.py <socnav binary> <output dir>")
    binary, out_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, script in SCRIPTS:
        (out_dir / f"{name}.jsonl").write_text(record(binary, name, script))
    print(f"wrote {len(SCRIPTS)} transcripts to {out_dir}")


if __name__ == "__main__":
    main()
