#!/usr/bin/env python3
# Copyright 2026 The Ogmios Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Generates include/ogmios/unicode_tables.hpp from Python's unicodedata.

Usage: tools/gen_unicode_tables.py > include/ogmios/unicode_tables.hpp
       tools/gen_unicode_tables.py --sample > tests/data/unicode_sample.tsv
"""

import random
import sys
import unicodedata

MAX_CP = 0x110000


def ranges(pred):
    out, start = [], None
    for cp in range(MAX_CP):
        ok = pred(cp)
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def is_letter(cp):
    return unicodedata.category(chr(cp)).startswith("L")


def is_digit(cp):
    return unicodedata.category(chr(cp)) == "Nd"


def lower_pairs():
    pairs = []
    for cp in range(MAX_CP):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def emit_ranges(name, rs):
    print(f"inline constexpr CodepointRange {name}[] = {{")
    for a, b in rs:
        print(f"    {{0x{a:X}, 0x{b:X}}},")
    print("};")
    print()


def header():
    with open(__file__, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("#"):
                break
            if not line.startswith("#!"):
                print("//" + line[1:].rstrip("\n"))
    print()
    print("// Generated by tools/gen_unicode_tables.py from Unicode "
          f"{unicodedata.unidata_version}. Do not edit.")
    print("#pragma once")
    print()
    print("namespace ogmios::unicode::tables {")
    print()
    print("struct CodepointRange {")
    print("  char32_t first;")
    print("  char32_t last;")
    print("};")
    print()
    print("struct CaseMapping {")
    print("  char32_t from;")
    print("  char32_t to;")
    print("};")
    print()
    print(f'inline constexpr const char* kUnicodeVersion = "{unicodedata.unidata_version}";')
    print()
    emit_ranges("kLetters", ranges(is_letter))
    emit_ranges("kDecimalDigits", ranges(is_digit))
    print("inline constexpr CaseMapping kLowercase[] = {")
    for a, b in lower_pairs():
        print(f"    {{0x{a:X}, 0x{b:X}}},")
    print("};")
    print()
    print("}  // namespace ogmios::unicode::tables")


WHITESPACE = {0x9, 0xA, 0xB, 0xC, 0xD, 0x20, 0x85, 0xA0, 0x1680, 0x2028,
              0x2029, 0x202F, 0x205F, 0x3000} | set(range(0x2000, 0x200B))


def sample():
    rng = random.Random(20061)
    cps = set(range(0, 0x250)) | WHITESPACE
    while len(cps) < 6000:
        cp = rng.randrange(MAX_CP)
        if not 0xD800 <= cp <= 0xDFFF:
            cps.add(cp)
    print("# codepoint (hex)\tclass (L=letter, D=digit, S=whitespace, O=other)")
    for cp in sorted(cps):
        if cp in WHITESPACE:
            cls = "S"
        elif is_letter(cp):
            cls = "L"
        elif is_digit(cp):
            cls = "D"
        else:
            cls = "O"
        print(f"{cp:X}\t{cls}")


if __name__ == "__main__":
    if "--sample" in sys.argv:
        sample()
    else:
        header()
