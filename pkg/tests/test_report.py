from gbs.families import FamilySpec
from gbs.report import CITE_CRKZ, CITE_RATIO, CITE_TAILS, digest_of, family_facts, incommensurability_report


def test_digest():
    assert digest_of("a", "b") != digest_of("ab")
    assert digest_of(b"x") == digest_of("x")


def test_lambda_hypotheses():
    f = family_facts(FamilySpec("Lambda_l", dict(l=3, d=3, m=2, n=5, q=2)))
    assert f.ratio_hypotheses and (f.vertices, f.edges) == (3, 3 * 2 + 2)


def test_gamma_pairs_use_ratio_tails():
    specs = [FamilySpec("B1", dict(d=2, m=2, n=3))]
    specs += [FamilySpec("Gamma_k", dict(k=k, d=2, m=4, n=3, p=2)) for k in (2, 3)]
    rep = incommensurability_report(specs)
    for verdict, cites in rep.verdicts.values():
        assert verdict == "incommensurable" and CITE_TAILS in cites


def test_crkz_obstruction():
    specs = [FamilySpec("B1", dict(d=4, m=1, n=3)), FamilySpec("Delta_k", dict(k=2, d=4, n=3, p=3))]
    rep = incommensurability_report(specs)
    (verdict, cites), = rep.verdicts.values()
    assert verdict == "incommensurable" and CITE_CRKZ in cites


def test_report_text_is_deterministic():
    specs = [FamilySpec("Lambda_l", dict(l=l, d=3, m=2, n=5, q=2)) for l in (2, 3)]
    a, b = incommensurability_report(specs, "x"), incommensurability_report(specs, "x")
    assert a.text() == b.text()
    assert a.text().startswith("command: x\ninputs sha256: ")
    assert CITE_RATIO in a.text()


def test_gamma_delta_family_separated_by_crkz():
    specs = [FamilySpec("B1", dict(d=4, m=1, n=3))]
    specs += [FamilySpec("Delta_k", dict(k=k, d=4, n=3, p=3)) for k in (2, 3)]
    rep = incommensurability_report(specs)
    assert len(rep.verdicts) == 3
    for verdict, cites in rep.verdicts.values():
        assert verdict == "incommensurable" and CITE_CRKZ in cites
