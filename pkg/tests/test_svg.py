import xml.etree.ElementTree as ET

import numpy as np
import pytest

from linesmooth import pipeline as P
from linesmooth.svg import entropy_plot_svg, rank_plot_svg, render_entropy_plot

NS = {"s": "http://www.w3.org/2000/svg"}


def _score():
    xs = np.linspace(0.1, 1.0, 9)
    return P.score_metric("l1", {
        "gaussian": [(x, 3 - 2 * x) for x in xs],
        "topology": [(x, 1 + np.log(x + 1)) for x in xs[:-2]],
        "mean": [(x, 2.0 + 0.1 * x) for x in xs[1:]],
    })


def test_entropy_plot_structure(tmp_path):
    score = _score()
    curves = list(score.curves.values())
    path = tmp_path / "e.svg"
    render_entropy_plot(curves, path)
    root = ET.parse(path).getroot()
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    circles = root.findall(".//s:circle[@class='sample']", NS)
    assert len(circles) == sum(len(c.samples) for c in curves)
    models = root.findall(".//s:polyline[@class='model']", NS)
    assert len(models) == 3
    for m in models:
        assert (float(m.get("data-lo")), float(m.get("data-hi"))) == score.interval
    assert len(root.findall(".//s:polygon[@class='area']", NS)) == 3
    texts = [t.text for t in root.iter("{http://www.w3.org/2000/svg}text")]
    assert "ApEx" in texts and "l1" in texts
    assert any(t.startswith("topology") for t in texts)


def test_single_curve_without_fit_is_valid():
    c = P.EntropyCurve("median", "linf", [(0.2, 1.0)])
    root = ET.fromstring(entropy_plot_svg([c]))
    assert len(root.findall(".//s:circle", NS)) == 1
    assert root.findall(".//s:polyline", NS) == []


def test_entropy_plot_deterministic():
    a = entropy_plot_svg(list(_score().curves.values()))
    assert a == entropy_plot_svg(list(_score().curves.values()))


def _report(n_datasets, methods):
    ranks = {}
    for d in range(n_datasets):
        order = methods[d % len(methods):] + methods[:d % len(methods)]
        ranks[(f"d{d}", "l1")] = {m: float(i + 1) for i, m in enumerate(order)}
    return P.build_report(ranks)


def _columns(svg):
    root = ET.fromstring(svg)
    out = {}
    for g in root.findall(".//s:g[@class='column']", NS):
        out[g.get("data-name")] = [t.text for t in g.findall("s:text[@class='entry']", NS)]
    return root, out


def test_rank_plot_single_dataset():
    rep = _report(1, ["a", "b", "c"])
    _, cols = _columns(rank_plot_svg(rep, "l1"))
    assert list(cols) == ["d0", "average"]
    assert cols["d0"] == cols["average"] == ["a", "b", "c"]


def test_rank_plot_average_column_and_tracks():
    methods = ["a", "b", "c", "d", "e", "f"]
    rep = _report(4, methods)
    root, cols = _columns(rank_plot_svg(rep, "l1"))
    assert len(cols) == 5
    assert cols["average"] == list(rep.average_ranks["l1"])
    tracks = root.findall(".//s:polyline[@class='track']", NS)
    assert len(tracks) == 4
    assert [t.get("data-method") for t in tracks] == cols["average"][:4]


def test_rank_plot_few_methods_fewer_tracks():
    root, _ = _columns(rank_plot_svg(_report(2, ["a", "b"]), "l1"))
    assert len(root.findall(".//s:polyline[@class='track']", NS)) == 2


def test_rank_plot_unknown_metric():
    with pytest.raises(ValueError):
        rank_plot_svg(_report(1, ["a", "b"]), "linf")
