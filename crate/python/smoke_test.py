"""Smoke test for the wres_verifier extension module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json

import wres_verifier as wv


def main():
    f = wv.RatFunc("xi/(1+xi^2)^2")
    assert str(f.pi_plus()) == "-i/(4*(xi-i)^2)", f.pi_plus()
    g = wv.RatFunc("xi/(1+xi^2)^3").pi_plus()
    assert g == wv.RatFunc("-i/(16*(xi-i)^2)-1/(8*(xi-i)^3)")

    assert str(wv.coefficient("B0", 4)) == "-15/8"
    assert wv.coefficient("M0", 4) == wv.Gaussian("-i/8")
    assert complex(wv.coefficient("H0", 4)) == 0.75j
    assert len(wv.coefficient_names()) == 24

    rep = json.loads(wv.verify_coefficients([4], names=["E2"], nodes=256))
    assert rep["findings"][0]["anchor"] == "c11"

    t41 = wv.boundary("t41", 4)
    assert str(t41) == "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )", t41
    assert t41 == wv.printed_theorem("t41", 4)
    derived = wv.boundary("t41", 4, variant="derived", aa38="principal-part")
    print("t41 derived:", derived)

    inner = wv.interior(4)
    assert inner.coefficient("PI^2*EINSTEIN_XY") == wv.Gaussian("4/3"), inner.terms()

    rec = json.loads(wv.reconcile("t31", 4))
    assert any(f["anchor"] == "aa38" for f in rec["findings"])

    assert wv.spinor_trace("1") == wv.Gaussian("4")
    assert wv.spinor_trace("CXI*CDXN") == wv.Gaussian("0")
    code, out, _ = wv.run_cli(["coeff", "B0", "--n", "4"])
    assert (code, out) == (0, "-15/8\n")
    code, _, _ = wv.run_cli(["coeff", "Z9", "--n", "4"])
    assert code == 64
    print("smoke test ok")


if __name__ == "__main__":
    main()
