# src/data_generator/main.py
import logging
from pathlib import Path
from typing import Dict

from src.data_generator.models import SynthSpec
from src.data_generator.plant_simulator import SyntheticDataset, synth_generate
from src.storage.label_file import write_label_file
from src.storage.sensor_file import write_sensor_file

logger = logging.getLogger(__name__)

SENSOR_FILE = "sensor.csv"
LABEL_FILE = "labels.csv"
TRUTH_FILE = "truth.csv"


def write_dataset(dataset: SyntheticDataset, out_dir: Path) -> Dict[str, Path]:
    """Write sensor, weak-label and ground-truth files; returns their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "sensor": out_dir / SENSOR_FILE,
        "labels": out_dir / LABEL_FILE,
        "truth": out_dir / TRUTH_FILE,
    }
    provenance = [("generator", "synth"), ("seed", dataset.seed)]
    write_sensor_file(dataset.series, paths["sensor"], provenance)
    write_label_file(dataset.labels, paths["labels"], dataset.classes)
    write_label_file(dataset.truth, paths["truth"], dataset.classes)
    logger.info(f"Synthetic dataset (seed={dataset.seed}) written to {out_dir}")
    return paths


def generate_dataset(spec: SynthSpec, seed: int, out_dir: Path) -> Dict[str, Path]:
    return write_dataset(synth_generate(spec, seed), out_dir)
