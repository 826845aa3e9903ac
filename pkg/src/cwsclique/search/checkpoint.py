"""Append-only JSONL checkpoint of per-graph search records.

The first line holds the job; every further line is one finished graph keyed by
its labeled id. Replaying the log is idempotent: a record seen twice counts once.
"""
import json
import os
from typing import Dict, Optional

from loguru import logger

from cwsclique.errors import ParseError, UsageError


class Checkpoint:
    def __init__(self, path, job: dict):
        self.path = path
        self.job = job
        self.records: Dict[str, dict] = {}
        if os.path.exists(path) and os.path.getsize(path) > 0:
            self._replay()
        else:
            with open(path, "w", encoding="utf-8") as f:
                f.write(json.dumps({"job": job}, sort_keys=True) + "\n")

    def _replay(self):
        with open(self.path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
        try:
            header = json.loads(lines[0])
        except json.JSONDecodeError:
            raise ParseError("checkpoint header is not JSON", self.path, 1)
        if header.get("job") != self.job:
            raise UsageError(f"checkpoint {self.path} belongs to a different job")
        kept = lines[:1]
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                # a run killed mid-write leaves at most one torn trailing line
                if lineno == len(lines):
                    logger.warning(f"{self.path}:{lineno}: dropping truncated record")
                    with open(self.path, "w", encoding="utf-8") as f:
                        f.write("".join(k + "\n" for k in kept))
                    continue
                raise ParseError("record is not JSON", self.path, lineno)
            kept.append(line)
            self.records[record["id"]] = record
        logger.info(f"resuming from {self.path}: {len(self.records)} graphs done")

    def done(self, graph_id: str) -> bool:
        return graph_id in self.records

    def get(self, graph_id: str) -> Optional[dict]:
        return self.records.get(graph_id)

    def append(self, record: dict):
        if record["id"] in self.records:
            return
        self.records[record["id"]] = record
        with open(self.path, "a", encoding="utf-8") as f:
            f.write(json.dumps(record, sort_keys=True) + "\n")
            f.flush()

    def __len__(self) -> int:
        return len(self.records)
