"""
Tests for the command line interface
"""

import pytest
import yaml
from click.testing import CliRunner

from colorank import __version__
from colorank.cli.main import main
from colorank.core.generators import basic_two_branch, full_binary_tree
from colorank.io.formats import dump_basic, dump_ranked, dump_tree
from colorank.trees.ranked import derive_ranked


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def tree_file(tmp_path):
    path = tmp_path / "b4.tree"
    path.write_text(dump_tree(full_binary_tree(4)))
    return str(path)


def test_info_version(runner):
    result = runner.invoke(main, ["info", "--version"])
    assert result.exit_code == 0
    assert f"Colorank v{__version__}" in result.output


def test_rank_reports_tree_rank(runner, tree_file):
    result = runner.invoke(main, ["rank", "-i", tree_file])
    assert result.exit_code == 0
    assert "rktree 3" in result.output


def test_rank_writes_output_file(runner, tree_file, tmp_path):
    target = tmp_path / "reports" / "b4.rk"
    result = runner.invoke(main, ["rank", "-i", tree_file, "-o", str(target)])
    assert result.exit_code == 0
    assert target.read_text().splitlines()[-1] == "rktree 3"


def test_malformed_input_exits_with_input_code(runner, tmp_path):
    path = tmp_path / "bad.tree"
    path.write_text("tree N=2 H=3 min=1\ngnode 1 t=0 v=0,0\n")
    result = runner.invoke(main, ["validate", "-i", str(path)])
    assert result.exit_code == 2
    assert "bad.tree:2:" in result.output


def test_missing_input_file_exits_with_input_code(runner, tmp_path):
    result = runner.invoke(main, ["rank", "-i", str(tmp_path / "absent.tree")])
    assert result.exit_code == 2


def test_generated_basic_tree_validates(runner, tmp_path):
    target = tmp_path / "random.btree"
    result = runner.invoke(main, ["generate", "--kind", "basic", "--seed", "3", "-o", str(target)])
    assert result.exit_code == 0
    assert target.read_text().startswith("btree H=4")
    result = runner.invoke(main, ["validate", "-i", str(target), "--format", "json"])
    assert result.exit_code == 0
    assert '"ok": true' in result.output


def test_chain_command(runner, tree_file):
    result = runner.invoke(main, ["chain", "-i", tree_file, "--depth", "2"])
    assert result.exit_code == 0
    assert len([line for line in result.output.splitlines() if line.startswith("chain ")]) == 3


def test_model_rank_and_oracle_validation(runner, tmp_path):
    model = tmp_path / "empty.model"
    model.write_text("model m=4\n")
    oracle = tmp_path / "empty.oracle"
    result = runner.invoke(main, ["model-rank", "-i", str(model), "-o", str(oracle)])
    assert result.exit_code == 0
    assert "model rank 3" in result.output
    assert "mrank 0 r=2 c=0 phi=|" in oracle.read_text()
    result = runner.invoke(main, ["validate", "-i", str(oracle), "--model", str(model)])
    assert result.exit_code == 0


def test_realize_then_sweep(runner, tmp_path):
    coloring = tmp_path / "pairs.cm"
    coloring.write_text("cm 0 00,11\ncm 1 01,10\n")
    scene = tmp_path / "pairs.scene"
    result = runner.invoke(main, ["realize", "-i", str(coloring), "-o", str(scene)])
    assert result.exit_code == 0
    assert scene.read_text().startswith("scene N=2 H=2")
    result = runner.invoke(main, ["defect-sweep", "-i", str(coloring), "--scene", str(scene)])
    assert result.exit_code == 0
    assert "6 subsets checked, 2 defected" in result.output


def test_too_many_layers_is_an_input_error(runner, tmp_path):
    coloring = tmp_path / "pairs.cm"
    coloring.write_text("cm 0 00,11\ncm 1 01,10\n")
    result = runner.invoke(main, ["realize", "-i", str(coloring), "--mmax", "1"])
    assert result.exit_code == 2


def test_bad_config_file_is_an_input_error(runner, tree_file, tmp_path):
    config = tmp_path / "bad.yml"
    config.write_text("forcing:\n  theta: 1\n")
    result = runner.invoke(main, ["-c", str(config), "rank", "-i", tree_file])
    assert result.exit_code == 2


@pytest.mark.slow
def test_force_on_a_small_model(runner, tmp_path):
    config = tmp_path / "small.yml"
    config.write_text(yaml.dump({
        "budgets": {"approx_cap": 4, "approx_budget": 200000, "node_budget": 200000, "max_height": 12},
        "forcing": {"depth": 3},
    }))
    model = tmp_path / "empty.model"
    model.write_text("model m=4\n")
    result = runner.invoke(main, ["-c", str(config), "force", "-i", str(model)])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len([line for line in lines if line.startswith("eta ")]) == 4
    assert len([line for line in lines if line.startswith("cert ")]) == 6


def test_force_on_a_short_tree_reports_violation(runner, tmp_path):
    model = tmp_path / "empty.model"
    model.write_text("model m=4\n")
    result = runner.invoke(main, ["force", "-i", str(model), "--depth", "3", "--height", "3"])
    assert result.exit_code == 1
    assert "too short" in result.output


@pytest.fixture
def small_config(tmp_path):
    config = tmp_path / "small.yml"
    config.write_text(yaml.dump({
        "budgets": {"approx_cap": 4, "approx_budget": 200000, "node_budget": 200000, "max_height": 12},
        "templates": {"max_roots": 2, "max_colors": 1, "max_level": 2},
    }))
    return str(config)


@pytest.mark.slow
def test_embed_ranked_tree(runner, tmp_path, small_config):
    ranked = tmp_path / "l3.ranked"
    ranked.write_text(dump_ranked(derive_ranked(basic_two_branch(3))))
    result = runner.invoke(main, ["-c", small_config, "embed", "-i", str(ranked)])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len([line for line in lines if line.startswith("f ")]) == 4
    assert len([line for line in lines if line.startswith("fstar ")]) == 1


@pytest.mark.slow
def test_embed_coloring_keeps_the_rank(runner, tmp_path, small_config):
    coloring = tmp_path / "l3.btree"
    coloring.write_text(dump_basic(basic_two_branch(3)))
    result = runner.invoke(main, ["-c", small_config, "embed", "-i", str(coloring), "--mode", "coloring"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len([line for line in lines if line.startswith("phi ")]) == 2
    assert "rank 1 augmented=1" in lines
