# Copyright 2026 The iacsmell Authors.
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


"""Per-smell table for the fixture corpus, computed from the hand-written
expected findings and oracle without using the analyzer.

Usage: python3 per_smell_table.py <fixtures-dir>  (writes expected_table.csv)
"""

import csv
import os
import sys

SMELLS = [
    "AdminByDefault", "EmptyPassword", "HardCodedSecret", "MissingDefaultCase",
    "NoIntegrityCheck", "SuspiciousComment", "InvalidIpBinding", "HttpWithoutTls",
    "WeakCrypto",
]


def read_triples(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return {(r[0], int(r[1]), r[2]) for r in rows[1:] if r}


def prf(tp, fp, fn):
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f


def main(fixtures):
    predicted = read_triples(os.path.join(fixtures, "expected_findings.csv"))
    oracle = read_triples(os.path.join(fixtures, "oracle.csv"))
    corpus = os.path.join(fixtures, "corpus")
    files = set()
    for dirpath, _, names in os.walk(corpus):
        for name in names:
            if name.endswith((".pp", ".yml", ".yaml", ".rb")):
                files.add(os.path.relpath(os.path.join(dirpath, name), corpus))

    lines = ["smell,tp,fp,fn,precision,recall,f1"]
    for smell in SMELLS:
        pred = {t for t in predicted if t[2] == smell}
        gold = {t for t in oracle if t[2] == smell}
        tp, fp, fn = len(pred & gold), len(pred - gold), len(gold - pred)
        p, r, f = prf(tp, fp, fn)
        lines.append(f"{smell},{tp},{fp},{fn},{p:.4f},{r:.4f},{f:.4f}")

    smelly = {t[0] for t in oracle}
    flagged = {t[0] for t in predicted}
    clean = files - smelly
    tp = len(clean - flagged)
    fp = len(clean & flagged)
    fn = len(smelly - flagged)
    p, r, f = prf(tp, fp, fn)
    lines.append(f"NoSmell,{tp},{fp},{fn},{p:.4f},{r:.4f},{f:.4f}")

    with open(os.path.join(fixtures, "expected_table.csv"), "w") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
