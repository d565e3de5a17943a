#!/usr/bin/env python3
"""Regenerates include/toposprob/fixtures.hpp from fixtures/*.json."""
import json
import pathlib

root = pathlib.Path(__file__).resolve().parent.parent
order = ["q3", "dim2", "rotated3", "dim4", "classical3"]
parts = []
for name in order:
    text = (root / "fixtures" / f"{name}.json").read_text()
    desc = json.loads(text).get("description", "")
    parts.append(f'    {{"{name}", {json.dumps(desc)},\n     R"json({text})json"}},\n')

header = f"""#pragma once

// Generated by tools/embed_fixtures.py from fixtures/*.json.

#include <string>
#include <string_view>
#include <vector>

#include "toposprob/error.hpp"

namespace toposprob {{

struct Fixture {{
    std::string_view name;
    std::string_view description;
    std::string_view text;
}};

inline const std::vector<Fixture> &fixtures() {{
    static const std::vector<Fixture> all{{
{''.join(parts)}    }};
    return all;
}}

inline const Fixture &fixture(std::string_view name) {{
    for (const auto &f : fixtures()) {{
        if (f.name == name) {{
            return f;
        }}
    }}
    fail(ErrorKind::UnknownReference, "no fixture named '" + std::string(name) + "'");
}}

}} // namespace toposprob
"""
(root / "include" / "toposprob" / "fixtures.hpp").write_text(header)
