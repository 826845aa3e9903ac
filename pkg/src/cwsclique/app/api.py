import os
from typing import List, Optional, Tuple

from cwsclique.errors import UsageError
from cwsclique.eval.verify import (CWSCode, VerificationReport, code_distance, detection_check,
                                   kl_oracle)
from cwsclique.model.ac06 import AC06Data, ChainRecord, ac06_to_standard_form, cws_to_ac06
from cwsclique.model.clique import CliqueGraph, make_cws_clique_graph
from cwsclique.model.errormap import ClArrays, ErrorSet, error_set, setup, setup_partitioned
from cwsclique.model.graphs import Graph, canonical_form, label_hex, lc_orbit
from cwsclique.model.structure import (Registry, additivity_label, double_linear_subcode,
                                       extend_dim3_to_dim4, is_linear, load_registry)
from cwsclique.model.gf2 import ClassicalCode
from cwsclique.search.driver import SearchJob, SearchResult, run_search, write_result
from cwsclique.utils import hparam_utils as utils

RUN_CONFIG = "config.json"
RUN_CHECKPOINT = "checkpoint.jsonl"
RUN_RESULT = "result.txt"


class CWSSearch:
    """Entry point bundling the configured limits with the search and verification tools."""

    def __init__(self, config_path=None, registry_path=None, **overrides):
        hps = utils.get_hparams_from_file(config_path) if config_path else utils.get_default_hparams()
        if overrides:
            hps = utils.merge_hparams(hps, {"search": overrides})
        self.hps = hps
        self.limits = hps.limits
        self.registry: Optional[Registry] = load_registry(registry_path) if registry_path else None

    def job(self, **overrides) -> SearchJob:
        return SearchJob.from_hparams(self.hps, **overrides)

    def search(self, n=None, d=None, checkpoint=None, quiet=False, **overrides) -> SearchResult:
        job = self.job(n=n, d=d, **overrides)
        return run_search(job, checkpoint_path=checkpoint, registry=self.registry, quiet=quiet)

    def search_to_file(self, output_path, n=None, d=None, checkpoint=None, quiet=False, **overrides) -> SearchResult:
        result = self.search(n=n, d=d, checkpoint=checkpoint, quiet=quiet, **overrides)
        write_result(output_path, result)
        return result

    def search_in_dir(self, run_dir, quiet=False, **overrides) -> SearchResult:
        """Run (or resume) a search whose job, checkpoint and result live in ``run_dir``."""
        if os.path.exists(os.path.join(run_dir, RUN_CONFIG)):
            job = SearchJob.from_hparams(utils.get_hparams_from_dir(run_dir), **overrides)
        else:
            job = self.job(**overrides)
            os.makedirs(run_dir, exist_ok=True)
            utils.save_hparams(job.to_hparams(), os.path.join(run_dir, RUN_CONFIG))
        result = run_search(job, checkpoint_path=os.path.join(run_dir, RUN_CHECKPOINT),
                            registry=self.registry, quiet=quiet)
        write_result(os.path.join(run_dir, RUN_RESULT), result)
        return result

    def map_errors(self, g: Graph, d: int, workers: int = 1) -> ClArrays:
        errors = error_set(g.n, d)
        if workers > 1:
            return setup_partitioned(errors, g, workers, self.limits.max_qubits)
        return setup(errors, g, self.limits.max_qubits)

    def clique_graph(self, g: Graph, d: int) -> CliqueGraph:
        return make_cws_clique_graph(self.map_errors(g, d), self.limits.max_clique_vertices)

    def verify(self, q: CWSCode, d: Optional[int] = None, errors: Optional[ErrorSet] = None) -> VerificationReport:
        """Detection at ``d`` (the claimed distance by default) plus the distance and oracle checks.

        An explicit ``errors`` set replaces the weight-based one for the detection check.
        """
        d = d if d is not None else q.claimed_distance
        distance = code_distance(q, self.limits.max_oracle_qubits)
        if d is None:
            d = distance
        report = detection_check(q, errors if errors is not None else error_set(q.n, d))
        oracle = None
        if q.n <= self.limits.max_oracle_qubits:
            oracle = kl_oracle(q, d, self.limits.max_oracle_qubits)
        return VerificationReport(report.detects, report.degenerate, report.witness, oracle, distance)

    def convert(self, data: AC06Data) -> Tuple[CWSCode, ChainRecord]:
        return ac06_to_standard_form(data)

    def to_ac06(self, q: CWSCode) -> AC06Data:
        return cws_to_ac06(q)

    def structure(self, q: CWSCode, action: str, subcode: Optional[ClassicalCode] = None,
                  v: Optional[int] = None):
        if action == "linear":
            return is_linear(q.code)
        if action == "label":
            return additivity_label(q.code)
        if action == "extend-dim3":
            d = q.claimed_distance if q.claimed_distance is not None else code_distance(q)
            return extend_dim3_to_dim4(q, error_set(q.n, d))
        if action == "double":
            if subcode is None or v is None:
                raise UsageError("doubling needs a linear subcode and a codeword v")
            return double_linear_subcode(q, subcode, v)
        raise UsageError(f"unknown structure action {action!r}")

    @staticmethod
    def orbit(g: Graph) -> List[str]:
        """Canonical ids of the LC orbit of ``g``, smallest first."""
        return [label_hex(g.n, label) for label in sorted(lc_orbit(g))]

    @staticmethod
    def canonical_id(g: Graph) -> str:
        return label_hex(g.n, canonical_form(g).label)
