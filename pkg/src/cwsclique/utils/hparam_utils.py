import os
import json
import logging

logger = logging.getLogger(__name__)

ASSETS_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "assets")
DEFAULT_CONFIG = os.path.join(ASSETS_DIR, "config.json")


def get_hparams_from_dir(run_dir):
    config_save_path = os.path.join(run_dir, "config.json")
    with open(config_save_path, "r", encoding="utf-8") as f:
        data = f.read()
    config = json.loads(data)

    hparams = HParams(**config)
    hparams.run_dir = run_dir
    return hparams


def get_hparams_from_file(config_path):
    with open(config_path, "r", encoding="utf-8") as f:
        data = f.read()
    config = json.loads(data)

    hparams = HParams(**config)
    return hparams


def get_default_hparams():
    return get_hparams_from_file(DEFAULT_CONFIG)


def merge_hparams(base, overrides):
    """Copy of ``base`` with the non-None entries of ``overrides`` (nested dicts merged)."""
    merged = base.to_dict()
    for k, v in overrides.items():
        if v is None:
            continue
        if isinstance(v, dict) and isinstance(merged.get(k), dict):
            merged[k] = merge_hparams(HParams(**merged[k]), v).to_dict()
        else:
            merged[k] = v
    return HParams(**merged)


def save_hparams(hparams, config_path):
    with open(config_path, "w", encoding="utf-8") as f:
        json.dump(hparams.to_dict(), f, indent=2, sort_keys=True)
        f.write("\n")


def get_logger(run_dir, filename="search.log"):
    global logger
    logger = logging.getLogger("cwsclique")
    logger.setLevel(logging.DEBUG)

    formatter = logging.Formatter("%(asctime)s\t%(name)s\t%(levelname)s\t%(message)s")
    if not os.path.exists(run_dir):
        os.makedirs(run_dir, exist_ok=True)
    h = logging.FileHandler(os.path.join(run_dir, filename))
    h.setLevel(logging.DEBUG)
    h.setFormatter(formatter)
    logger.addHandler(h)
    return logger


class HParams:
    def __init__(self, **kwargs):
        for k, v in kwargs.items():
            if type(v) == dict:
                v = HParams(**v)
            self[k] = v

    def keys(self):
        return self.__dict__.keys()

    def items(self):
        return self.__dict__.items()

    def values(self):
        return self.__dict__.values()

    def get(self, key, default=None):
        return self.__dict__.get(key, default)

    def to_dict(self):
        return {k: v.to_dict() if isinstance(v, HParams) else v for k, v in self.items()}

    def __len__(self):
        return len(self.__dict__)

    def __getitem__(self, key):
        return getattr(self, key)

    def __setitem__(self, key, value):
        return setattr(self, key, value)

    def __contains__(self, key):
        return key in self.__dict__

    def __repr__(self):
        return self.__dict__.__repr__()
