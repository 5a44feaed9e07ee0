"""Smoke test for the ldlogic extension.

Build and install first:
    pip install maturin
    pip install -e crates/python --no-build-isolation
"""

import json
import pathlib
import sys

import ldlogic

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "corpus"


def main():
    assert ldlogic.decide("x | ~x")["verdict"] == "Valid"

    r = ldlogic.decide("_a \\/ !_a")
    assert r["verdict"] == "CounterModel", r
    assert not ldlogic.evaluate(r["model"], "_a \\/ !_a")
    print("countermodel:", json.loads(r["model"]))

    paradox = (CORPUS / "models" / "liar_paradox.json").read_text()
    assert ldlogic.evaluate(paradox, "x <=> !x", world="MA")
    for rhs in ["~+x", "~!x", "~x", "~*x"]:
        assert ldlogic.decide(f"(x <=> !x) => {rhs}")["verdict"] == "Valid", rhs

    chain = (CORPUS / "proofs" / "hypothetical_chain.jsonl").read_text()
    assert ldlogic.check_proof(chain) is None
    assert ldlogic.check_proof(ldlogic.deduce(chain)) is None

    assert ldlogic.translate("a => b => a") == "(a((b(a))))"
    assert [len(ldlogic.posets(n)) for n in (1, 2, 3)] == [1, 3, 19]

    try:
        ldlogic.parse("(a")
    except ldlogic.LdError as e:
        print("parse error as expected:", e)
    else:
        sys.exit("expected a parse error")
    print("ok")


if __name__ == "__main__":
    main()
