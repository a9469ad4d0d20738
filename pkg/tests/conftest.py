import shutil
from pathlib import Path

import pytest

from cinesent.cli import main

FIXTURES = Path(__file__).parent / "fixtures"

E2E_INPUTS = ("fixture.config", "catalog.csv", "corpus", "train_sentiment.csv",
              "train_abuse.csv")

FULL_RUN = [
    ["ingest", "--config", "fixture.config"],
    ["train", "--config", "fixture.config", "--task", "sentiment",
     "--data", "train_sentiment.csv", "--epochs", "300", "--learning-rate", "0.5"],
    ["train", "--config", "fixture.config", "--task", "abuse",
     "--data", "train_abuse.csv", "--epochs", "300", "--learning-rate", "0.5"],
    ["analyze", "--config", "fixture.config", "--scope", "corpus"],
    ["analyze", "--config", "fixture.config", "--scope", "film", "--id", "iron_pursuit"],
]


def strip_manifest_timestamp(text: str) -> str:
    return "\n".join(
        line for line in text.splitlines() if '"generated_at"' not in line
    )


@pytest.fixture
def e2e_dir(tmp_path):
    """Byte-identical working copy of the end-to-end fixture inputs."""
    for name in E2E_INPUTS:
        source = FIXTURES / "e2e" / name
        target = tmp_path / name
        if source.is_dir():
            shutil.copytree(source, target)
        else:
            shutil.copy(source, target)
    return tmp_path


def run_cli(args, cwd, monkeypatch):
    monkeypatch.chdir(cwd)
    return main(args)


@pytest.fixture
def cli(monkeypatch):
    def runner(args, cwd):
        return run_cli(args, cwd, monkeypatch)
    return runner
