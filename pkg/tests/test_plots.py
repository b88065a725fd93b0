import os
from fractions import Fraction
from unittest.mock import patch

import pytest

from condmodel.analysis import RaggedVec, Selection, bw_subsequence
from condmodel.fixtures import TOLERANCES, get_fixture
from condmodel.measure import make_space
from condmodel.plots import VisualizationCreator
from condmodel.values import CondReal


@pytest.fixture
def creator(tmp_path):
    return VisualizationCreator(output_dir=tmp_path / "plots")


def test_output_dir_created(creator):
    assert os.path.isdir(creator.output_dir)


def test_bw_plot_written(creator):
    fixture = get_fixture("alternating|harmonic")
    seq, target = fixture.sequence(), fixture.limsup()
    indices = bw_subsequence(seq, target, TOLERANCES)
    path = creator.create_bw_plot(seq, indices, target, horizon=200, filename="trace.png")
    assert path.endswith("trace.png")
    assert os.path.getsize(path) > 0


def test_argmin_plot_written(creator):
    space = make_space(["1/2", "1/2"])
    selection = Selection(
        RaggedVec(space, ((0,), (1,))), CondReal(space, (Fraction(-1), Fraction(1, 2)))
    )
    path = creator.create_argmin_plot(selection)
    assert os.path.basename(path) == "argmin_values.png"
    assert os.path.exists(path)


@patch("condmodel.plots.sns.barplot", side_effect=RuntimeError("no backend"))
def test_plot_errors_propagate(mock_barplot, creator, capsys):
    space = make_space([1])
    selection = Selection(RaggedVec(space, ((0,),)), CondReal(space, (0,)))
    with pytest.raises(RuntimeError):
        creator.create_argmin_plot(selection)
    assert "Error creating argmin plot" in capsys.readouterr().out
