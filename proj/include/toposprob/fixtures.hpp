#pragma once

// Generated by tools/embed_fixtures.py from fixtures/*.json.

#include <string>
#include <string_view>
#include <vector>

#include "toposprob/error.hpp"

namespace toposprob {

struct Fixture {
    std::string_view name;
    std::string_view description;
    std::string_view text;
};

inline const std::vector<Fixture> &fixtures() {
    static const std::vector<Fixture> all{
    {"q3", "Diagonal context of C^3 and its three two-block coarsenings; the pair of states with equal supports.",
     R"json({
  "format": "toposprob-instance/1",
  "name": "q3",
  "description": "Diagonal context of C^3 and its three two-block coarsenings; the pair of states with equal supports.",
  "dimension": 3,
  "mode": "exact",
  "contexts": [
    {
      "name": "Vmax",
      "blocks": [
        {
          "span": [["1","0","0"]]
        },
        {
          "span": [["0","1","0"]]
        },
        {
          "span": [["0","0","1"]]
        }
      ]
    },
    {
      "name": "V1",
      "blocks": [
        {
          "span": [["1","0","0"]]
        },
        {
          "span": [["0","1","0"],["0","0","1"]]
        }
      ]
    },
    {
      "name": "V2",
      "blocks": [
        {
          "span": [["0","1","0"]]
        },
        {
          "span": [["1","0","0"],["0","0","1"]]
        }
      ]
    },
    {
      "name": "V3",
      "blocks": [
        {
          "span": [["0","0","1"]]
        },
        {
          "span": [["1","0","0"],["0","1","0"]]
        }
      ]
    }
  ],
  "states": [
    {
      "name": "rho",
      "density": [["1/2","0","0"],["0","1/2","0"],["0","0","0"]]
    },
    {
      "name": "rho_tilde",
      "density": [["3/4","0","0"],["0","1/4","0"],["0","0","0"]]
    },
    {
      "name": "e1",
      "vector": ["1","0","0"]
    },
    {
      "name": "mix",
      "mixture": [
        {
          "vector": ["1","0","0"],
          "weight": "3/4"
        },
        {
          "vector": ["0","1","0"],
          "weight": "1/4"
        }
      ]
    }
  ],
  "propositions": [
    {
      "name": "P1",
      "span": [["1","0","0"]]
    },
    {
      "name": "P2",
      "span": [["0","1","0"]]
    },
    {
      "name": "P3",
      "span": [["0","0","1"]]
    },
    {
      "name": "P12",
      "projection": [["1","0","0"],["0","1","0"],["0","0","0"]]
    },
    {
      "name": "A_le_2",
      "observable": [["1","0","0"],["0","2","0"],["0","0","3"]],
      "set": [
        {
          "hi": "2",
          "lo_closed": true,
          "hi_closed": true
        }
      ]
    }
  ]
}
)json"},
    {"dim2", "Smallest poset: one two-block context of C^2.",
     R"json({
  "format": "toposprob-instance/1",
  "name": "dim2",
  "description": "Smallest poset: one two-block context of C^2.",
  "dimension": 2,
  "mode": "exact",
  "contexts": [
    {
      "name": "V",
      "blocks": [
        {
          "span": [["1","0"]]
        },
        {
          "span": [["0","1"]]
        }
      ]
    }
  ],
  "states": [
    {
      "name": "rho",
      "density": [["1/3","0"],["0","2/3"]]
    },
    {
      "name": "plus",
      "vector": ["1","1"]
    }
  ],
  "propositions": [
    {
      "name": "P1",
      "span": [["1","0"]]
    },
    {
      "name": "Pplus",
      "span": [["1","1"]]
    }
  ]
}
)json"},
    {"rotated3", "Diagonal context of C^3 and a basis rotated in the e1-e2 plane; they share the coarsening {e3, span(e1, e2)}.",
     R"json({
  "format": "toposprob-instance/1",
  "name": "rotated3",
  "description": "Diagonal context of C^3 and a basis rotated in the e1-e2 plane; they share the coarsening {e3, span(e1, e2)}.",
  "dimension": 3,
  "mode": "float",
  "contexts": [
    {
      "name": "Vdiag",
      "blocks": [
        {
          "span": [["1","0","0"]]
        },
        {
          "span": [["0","1","0"]]
        },
        {
          "span": [["0","0","1"]]
        }
      ]
    },
    {
      "name": "Vrot",
      "blocks": [
        {
          "span": [[0.4472135954999579,0.8944271909999159,"0"]]
        },
        {
          "span": [[0.8944271909999159,-0.4472135954999579,"0"]]
        },
        {
          "span": [["0","0","1"]]
        }
      ]
    }
  ],
  "states": [
    {
      "name": "rho",
      "density": [["1/2","0","0"],["0","1/2","0"],["0","0","0"]]
    },
    {
      "name": "rho_tilde",
      "density": [["3/4","0","0"],["0","1/4","0"],["0","0","0"]]
    },
    {
      "name": "psi",
      "vector": [0.6,[0.0,0.8],"0"]
    }
  ],
  "propositions": [
    {
      "name": "P1",
      "span": [["1","0","0"]]
    },
    {
      "name": "R1",
      "span": [[0.4472135954999579,0.8944271909999159,"0"]]
    }
  ]
}
)json"},
    {"dim4", "Two maximal contexts of C^4 sharing e1 and e2; the second splits span(e3, e4) along e3+e4 and e3-e4.",
     R"json({
  "format": "toposprob-instance/1",
  "name": "dim4",
  "description": "Two maximal contexts of C^4 sharing e1 and e2; the second splits span(e3, e4) along e3+e4 and e3-e4.",
  "dimension": 4,
  "mode": "exact",
  "contexts": [
    {
      "name": "W",
      "blocks": [
        {
          "span": [["1","0","0","0"]]
        },
        {
          "span": [["0","1","0","0"]]
        },
        {
          "span": [["0","0","1","0"]]
        },
        {
          "span": [["0","0","0","1"]]
        }
      ]
    },
    {
      "name": "Wrot",
      "blocks": [
        {
          "span": [["1","0","0","0"]]
        },
        {
          "span": [["0","1","0","0"]]
        },
        {
          "span": [["0","0","1","1"]]
        },
        {
          "span": [["0","0","1","-1"]]
        }
      ]
    }
  ],
  "states": [
    {
      "name": "rho",
      "density": [["1/2","0","0","0"],["0","1/4","0","0"],["0","0","1/8","0"],["0","0","0","1/8"]]
    },
    {
      "name": "psi",
      "vector": ["1","0","1","0"]
    }
  ],
  "propositions": [
    {
      "name": "P1",
      "span": [["1","0","0","0"]]
    },
    {
      "name": "Q",
      "span": [["0","0","1","1"]]
    },
    {
      "name": "P3",
      "span": [["0","0","1","0"]]
    }
  ]
}
)json"},
    {"classical3", "Three-point probability space.",
     R"json({
  "format": "toposprob-instance/1",
  "name": "classical3",
  "description": "Three-point probability space.",
  "mode": "exact",
  "measure_spaces": [
    {
      "name": "X",
      "points": ["a","b","c"],
      "weights": ["1/2","1/3","1/6"]
    }
  ]
}
)json"},
    };
    return all;
}

inline const Fixture &fixture(std::string_view name) {
    for (const auto &f : fixtures()) {
        if (f.name == name) {
            return f;
        }
    }
    fail(ErrorKind::UnknownReference, "no fixture named '" + std::string(name) + "'");
}

} // namespace toposprob
