from ordlocus.locus import Locus
from ordlocus.plotting import PlotOptions, render_figure, render_svg, save_svg


def test_svg_is_deterministic(locus_41):
    a = render_svg(locus_41)
    b = render_svg(locus_41)
    assert a == b
    assert a.startswith("<?xml")
    assert "<svg" in a


def test_one_panel_per_component(locus_52):
    fig = render_figure(locus_52, PlotOptions(el=False))
    visible = [ax for ax in fig.axes if ax.get_visible()]
    assert len(visible) == len(locus_52.components)
    titles = [ax.get_title() for ax in visible]
    assert titles[0] == "H$_{0,0}$"


def test_el_panel_comes_first(locus_52):
    fig = render_figure(locus_52)
    assert fig.axes[0].get_title() == "EL"


def test_quotient_mode(locus_52):
    fig = render_figure(locus_52, PlotOptions(quotient=True, el=False))
    titles = [ax.get_title() for ax in fig.axes if ax.get_visible()]
    assert all(t.startswith("PL ") for t in titles)
    assert len(titles) < len(locus_52.components)


def test_debug_su2_renders(locus_41):
    assert "<svg" in render_svg(locus_41, PlotOptions(debug_su2=True))


def test_empty_locus():
    svg = render_svg(Locus("empty", (1.5, 8.0), {}))
    assert "<svg" in svg


def test_save_svg(tmp_path, locus_41):
    path = tmp_path / "p.svg"
    save_svg(locus_41, path)
    assert path.read_text(encoding="utf-8") == render_svg(locus_41)
