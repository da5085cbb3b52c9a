# Storage module
from src.storage.dictionary_file import dump_dictionary, load_dictionary, parse_dictionary, save_dictionary
from src.storage.events_file import read_events_file, write_events_file
from src.storage.label_file import read_label_file, write_label_file
from src.storage.recording import Recording, ingest, load_recording, split_dataset, write_recording
from src.storage.sensor_file import IngestReport, read_sensor_file, write_sensor_file
