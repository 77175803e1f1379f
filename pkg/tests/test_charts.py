import xml.etree.ElementTree as ET

import pytest

from selfcite.charts import BAR_FILL, render_bar_chart

EDGES = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0]


def render(counts, **kwargs):
    kwargs.setdefault("title", "Distribution of SCAI Adjustments")
    kwargs.setdefault("x_label", "Adjustment Magnitude (%)")
    kwargs.setdefault("y_label", "Frequency")
    return render_bar_chart(EDGES, counts, **kwargs)


def test_edge_count_mismatch_rejected():
    with pytest.raises(ValueError):
        render_bar_chart([0.0, 1.0], [1, 2, 3], title="t", x_label="x", y_label="y")


def test_deterministic():
    counts = [3, 7, 2, 0, 1]
    assert render(counts) == render(counts)


def test_labels_and_title_present():
    svg = render([1, 2, 3, 4, 5])
    assert "Distribution of SCAI Adjustments" in svg
    assert "Adjustment Magnitude (%)" in svg
    assert "Frequency" in svg


def test_well_formed_svg():
    root = ET.fromstring(render([5, 0, 2, 8, 1]))
    assert root.tag.endswith("svg")
    rects = [el for el in root.iter() if el.tag.endswith("rect")]
    assert len(rects) >= 5


def test_all_zero_counts_render():
    svg = render([0, 0, 0, 0, 0])
    assert "<svg" in svg
    ET.fromstring(svg)


def test_axis_tick_labels_show_bin_edges():
    svg = render([1, 1, 1, 1, 1])
    for edge in ("0", "5", "10", "15", "20", "25"):
        assert f">{edge}<" in svg


def test_special_characters_escaped():
    svg = render_bar_chart(
        [0.0, 1.0], [4], title="a < b & c", x_label="x", y_label="y"
    )
    assert "a &lt; b &amp; c" in svg
    ET.fromstring(svg)


def test_bar_heights_scale_with_counts():
    svg = render([1, 2, 4, 8, 16])
    root = ET.fromstring(svg)
    heights = [
        float(el.get("height"))
        for el in root.iter()
        if el.tag.endswith("rect") and el.get("fill") == BAR_FILL
    ]
    assert heights == sorted(heights)
    assert heights[-1] > heights[0]
