from unittest.mock import patch

from graph_factories import cycle
from src.core.graph_io import save_graph
from src.main import main


@patch('src.main.print_banner')
@patch('builtins.print')
def test_main_without_arguments_shows_help(mock_print, mock_banner):
    with patch('sys.stdout'):
        assert main([]) == 0
    mock_banner.assert_called_once()


@patch('builtins.print')
def test_main_runs_a_subcommand(mock_print, tmp_path):
    path = str(tmp_path / "c4.json")
    save_graph(cycle(4), path)
    assert main(["width", path]) == 0


@patch('builtins.print')
def test_main_returns_error_codes(mock_print, tmp_path):
    assert main(["width", str(tmp_path / "missing.json")]) == 3
