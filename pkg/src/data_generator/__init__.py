# Data generator module
from src.data_generator.main import generate_dataset, write_dataset
from src.data_generator.models import PlantSpec, SynthSpec
from src.data_generator.plant_simulator import AccelerometerSimulator, SyntheticDataset, synth_generate
