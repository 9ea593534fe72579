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


"""Synthetic pseudo-label set: lookup fallbacks that only hold benign default
names are labeled FP, literal credentials and real transport or crypto
weaknesses are labeled TP. Deterministic; writes pseudo_train.jsonl and
pseudo_val.jsonl (8:1 by position).

Usage: python3 make_pseudo_labels.py <fixtures-dir>
"""

import json
import os
import sys

USER_NAMES = ["db_user", "app_user", "service_user", "repo_login", "mq_user", "api_user"]
BENIGN = ["nova", "glance", "postgres", "www-data", "nobody", "keystone", "neutron", "cinder"]
SECRET_NAMES = ["db_password", "admin_pwd", "api_token", "secret_key", "root_passwd", "ldap_password"]
SECRETS = ["S3cr3t!", "hunter2", "P@ssw0rd1", "Zx9!qL2#", "changeme123", "t0k3n-9f8a", "Qw3rty!!", "d4t4b4s3"]


def instance(tech, path, smell, target, context, rationale, label):
    return {
        "technology": tech, "file_path": path, "line": 2, "smell": smell,
        "target": target, "context": context, "rationale": rationale, "label": label,
    }


def wrap(tech, target):
    if tech == "Puppet":
        return "class profile::settings {\n" + target + "\n}"
    if tech == "Ansible":
        return "- hosts: all\n" + target + "\n  tasks: []"
    return "# attributes\n" + target + "\n# end"


def build():
    rows = []
    k = 0
    for i, name in enumerate(USER_NAMES):
        for j, value in enumerate(BENIGN):
            k += 1
            tech = ["Puppet", "Ansible", "Chef"][k % 3]
            key = name.split("_")[0]
            if tech == "Puppet":
                target = f"  ${name} = hiera('{key}::{name}', '{value}')"
            elif tech == "Ansible":
                target = f"    {name}: \"{{{{ lookup('env', '{name.upper()}') | default('{value}') }}}}\""
            else:
                target = f"default['{key}']['{name}'] = node['{key}']['owner'] || '{value}'"
            rows.append(instance(tech, f"synthetic/fallback_{k}", "HardCodedSecret", target, wrap(tech, target),
                                 f"identifier '{name}' holds literal '{value}'", "FP"))
    for i, name in enumerate(SECRET_NAMES):
        for j, value in enumerate(SECRETS):
            k += 1
            tech = ["Puppet", "Ansible", "Chef"][k % 3]
            if tech == "Puppet":
                target = f"  ${name} = '{value}'"
            elif tech == "Ansible":
                target = f"    {name}: \"{value}\""
            else:
                target = f"default['app']['{name}'] = \"{value}\""
            rows.append(instance(tech, f"synthetic/literal_{k}", "HardCodedSecret", target, wrap(tech, target),
                                 f"identifier '{name}' holds literal '{value}'", "TP"))
    hosts = ["repo", "mirror", "pkgs", "files", "downloads", "artifacts"]
    for i, host in enumerate(hosts):
        k += 1
        target = f"  source => 'http://{host}.corp.net/pkg-{i}.rpm',"
        rows.append(instance("Puppet", f"synthetic/http_{k}", "HttpWithoutTls", target, wrap("Puppet", target),
                             "'source' uses plain 'http://'", "TP"))
        k += 1
        target = f"  xmlns => 'http://schemas.xmlsoap.org/soap/envelope/{i}',"
        rows.append(instance("Puppet", f"synthetic/xmlns_{k}", "HttpWithoutTls", target, wrap("Puppet", target),
                             "'xmlns' uses plain 'http://'", "FP"))
    words = ["later", "todo", "fixme", "hack", "workaround", "xxx"]
    for i, word in enumerate(words):
        k += 1
        target = f"  # {word.upper()}: disable certificate checks on host {i}"
        rows.append(instance("Puppet", f"synthetic/comment_{k}", "SuspiciousComment", target, wrap("Puppet", target),
                             f"comment contains '{word}'", "TP"))
        k += 1
        target = f"  # see the bug tracker component {i} for release notes"
        rows.append(instance("Puppet", f"synthetic/comment_{k}", "SuspiciousComment", target, wrap("Puppet", target),
                             "comment contains 'bug'", "FP"))
    return rows


def main(fixtures):
    rows = build()
    train, val = [], []
    for i, row in enumerate(rows):
        (val if i % 9 == 4 else train).append(row)
    for name, part in (("pseudo_train.jsonl", train), ("pseudo_val.jsonl", val)):
        with open(os.path.join(fixtures, name), "w") as fh:
            for row in part:
                fh.write(json.dumps(row, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(sys.argv[1])
