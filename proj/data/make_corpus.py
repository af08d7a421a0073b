# Copyright 2026 The stvrla Authors
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

"""Generates synthetic multi-seat wards in the canonical ballot format.

    python3 make_corpus.py OUTDIR

writes w00_3.txt .. w39_4.txt. The bundled corpus/ keeps eight of them.
"""

import pathlib
import random
import sys


def ward(seed, seats, nc, n, ntypes):
    r = random.Random(seed)
    names = [chr(ord("A") + i) for i in range(nc)]
    weight = [r.random() ** 1.5 for _ in names]
    types = {}
    for _ in range(ntypes):
        k = min(r.choice([1, 1, 2, 2, 3, 3, 4, nc]), nc)
        pool, wt, prefs = names[:], weight[:], []
        for _ in range(k):
            c = r.choices(pool, weights=wt)[0]
            i = pool.index(c)
            pool.pop(i)
            wt.pop(i)
            prefs.append(c)
        types[tuple(prefs)] = 0
    keys = list(types)
    share = [weight[names.index(k[0])] * r.random() for k in keys]
    total = sum(share)
    lines = [f"candidates: {','.join(names)}", f"seats: {seats}"]
    for k, x in zip(keys, share):
        lines.append(f"{max(1, int(n * x / total))} : {','.join(k)}")
    return "\n".join(lines) + "\n"


def main():
    out = pathlib.Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    for seed in range(40):
        seats = 3 if seed % 2 == 0 else 4
        text = ward(seed, seats, 5 + seed % 4, 4000 + (seed * 997) % 5000, 12 + seed % 10)
        (out / f"w{seed:02d}_{seats}.txt").write_text(text)


if __name__ == "__main__":
    main()
