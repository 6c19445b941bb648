"""Regenerate the bundled classical PD codes from the Rolfsen table.

Requires the optional ``snappy``/``spherogram`` packages; the package itself
never imports them.  Edge labels are shifted to start at 1.

    python scripts/build_classical_table.py > src/flagknot/data/classical.json
"""

import json
import sys
import warnings

warnings.filterwarnings("ignore")
import spherogram  # noqa: E402

NAMES = ["3_1", "4_1", "5_1", "5_2"] + [f"6_{i}" for i in range(1, 4)] + \
    [f"7_{i}" for i in range(1, 8)] + [f"8_{i}" for i in range(1, 22)]


def pd_text(link):
    nodes = ",".join("X[%s]" % ",".join(str(e + 1) for e in x) for x in link.PD_code())
    return f"PD[{nodes}]"


def main():
    entries = []
    for name in NAMES:
        entries.append({"name": name, "pd": pd_text(spherogram.Link(name)),
                        "source": f"Rolfsen table via spherogram {spherogram.__version__}"})
    trefoil = spherogram.Link("3_1")
    granny = trefoil.connected_sum(spherogram.Link("3_1"))
    square = trefoil.connected_sum(spherogram.Link("3_1").mirror())
    for name, link in (("granny", granny), ("square", square)):
        entries.append({"name": name, "pd": pd_text(link),
                        "source": f"connected sum of 3_1 diagrams via spherogram {spherogram.__version__}"})
    json.dump({"version": 1, "knots": entries}, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
