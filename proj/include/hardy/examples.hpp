#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hardy {

/// Bundled example configurations, keyed by file name. `emit-example-configs`
/// writes these; the copies under configs/ must stay identical.
inline const std::vector<std::pair<std::string, std::string>>& example_configs() {
  static const std::vector<std::pair<std::string, std::string>> files = {
      {"heisenberg_cor25.json", R"({
  "statement": "cor2.5",
  "group": "heisenberg",
  "domain": {"halfspace": {"nu": [0, 0, 1], "d": 0}},
  "u": [
    {"kind": "bump", "center": [0, 0, 2], "widths": [1, 1, 1]},
    {"kind": "random", "seed": 25, "count": 20, "box": {"lo": [-1.5, -1.5, 0.5], "hi": [1.5, 1.5, 3.5]}}
  ],
  "rule": {"kind": "gauss", "nodes": 32}
}
)"},
      {"step2_synthetic.json", R"({
  "strata": [2, 1],
  "coeffs": [
    {"k": 1, "l": 2, "m": 1, "monomials": [
      {"exps": [1, 0, 0], "num": 1, "den": 1},
      {"exps": [0, 1, 0], "num": 1, "den": 1}
    ]},
    {"k": 2, "l": 2, "m": 1, "monomials": [
      {"exps": [1, 0, 0], "num": -1, "den": 1}
    ]}
  ]
}
)"},
      {"square_prism.json", R"({
  "facets": [
    {"nu": [1, 0, 0], "d": -1},
    {"nu": [-1, 0, 0], "d": -1},
    {"nu": [0, 1, 0], "d": -1},
    {"nu": [0, -1, 0], "d": -1}
  ],
  "witness": [0, 0, 0]
}
)"},
      {"engel_corE.json", R"({
  "statement": "corE",
  "group": "engel",
  "domain": {"halfspace": {"nu": [0.3, 0.2, 0.1, 0.5], "d": 0}},
  "u": [
    {"kind": "random", "seed": 4, "count": 4, "box": {"lo": [-0.5, -0.5, -0.5, 2], "hi": [0.5, 0.5, 0.5, 3]}}
  ],
  "beta": [-1, -0.5, 0.5],
  "rule": {"kind": "gauss", "nodes": 24}
}
)"},
      {"probes.json", R"({
  "statement": "cor2.3",
  "group": "euclidean:1",
  "domain": {"halfspace": {"nu": [1], "d": 0}},
  "u": [
    {"kind": "probe", "alpha": 0.51, "cutoff": {"lo": [0], "hi": [1]}},
    {"kind": "probe", "alpha": 0.6, "cutoff": {"lo": [0], "hi": [1]}},
    {"kind": "probe", "alpha": 0.75, "cutoff": {"lo": [0], "hi": [1]}},
    {"kind": "probe", "alpha": 1.0, "cutoff": {"lo": [0], "hi": [1]}},
    {"kind": "bump", "center": [2], "widths": [1]}
  ],
  "rule": {"kind": "gauss", "nodes": 128}
}
)"},
      {"acceptance.json", R"({
  "runs": [
    {
      "statement": "thm2.1",
      "group": "heisenberg",
      "domain": {"halfspace": {"nu": [0, 0.6, 0.8], "d": 0.5}},
      "u": [{"kind": "random", "seed": 11, "count": 4, "box": {"lo": [-1, -1, 1.5], "hi": [1, 1, 3.5]}}],
      "beta": [-1, -0.5, 0.25, 1]
    },
    {
      "statement": "cor2.2",
      "group": "step2:step2_synthetic.json",
      "domain": {"halfspace": {"nu": [0, 0, 1], "d": 0}},
      "u": [{"kind": "random", "seed": 12, "count": 4, "box": {"lo": [-1, -1, 0.5], "hi": [1, 1, 2.5]}, "tilted": true}],
      "beta": [-0.5, 0.5]
    },
    {
      "statement": "cor2.3",
      "group": "euclidean:2",
      "domain": {"halfspace": {"nu": [1, 1], "d": 0}},
      "u": [{"kind": "random", "seed": 13, "count": 4, "box": {"lo": [0.5, 0.5], "hi": [2.5, 2.5]}}]
    },
    {
      "statement": "cor2.4",
      "group": "euclidean:1",
      "domain": {"halfspace": {"nu": [1], "d": 0}},
      "u": [{"kind": "random", "seed": 14, "count": 4, "box": {"lo": [0.2], "hi": [3]}}]
    },
    {
      "statement": "thm2.6",
      "group": "heisenberg",
      "domain": {"halfspace": {"nu": [0, 0, 1], "d": 0}},
      "u": [{"kind": "random", "seed": 15, "count": 3, "box": {"lo": [-1, -1, 0.5], "hi": [1, 1, 2.5]}}],
      "beta": [-0.5, 0.5],
      "p": [1.5, 3],
      "lhs": "both"
    },
    {
      "statement": "thm3.1",
      "group": "heisenberg",
      "domain": {"polytope": "square_prism.json"},
      "u": [{"kind": "random", "seed": 16, "count": 3, "box": {"lo": [-1, -1, -1], "hi": [1, 1, 1]}}],
      "beta": [-1, -0.5]
    },
    {
      "statement": "thm3.2",
      "group": "heisenberg",
      "domain": {"polytope": "square_prism.json"},
      "u": [{"kind": "random", "seed": 17, "count": 3, "box": {"lo": [-1, -1, -1], "hi": [1, 1, 1]}}],
      "beta": [-0.25],
      "p": [3]
    },
    {
      "statement": "thm2.1",
      "group": "euclidean:5",
      "domain": {"halfspace": {"nu": [0, 0, 0, 0, 1], "d": 0}},
      "u": [{"kind": "bump", "center": [0, 0, 0, 0, 2], "widths": [1, 1, 1, 1, 1]}],
      "beta": [-0.5],
      "rule": {"kind": "montecarlo", "samples": 200000, "seed": 7}
    }
  ]
}
)"},
  };
  return files;
}

}  // namespace hardy
