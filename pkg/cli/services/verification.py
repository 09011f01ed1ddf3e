import logging
from pathlib import Path
from typing import Optional

from cli.models import RunManifest, VerifyReport
from cli.services.manifest import write_json, write_manifest
from src.theory.suite import run_suite

logger = logging.getLogger(__name__)

"""
Verification Service - Run a theory suite and report every check
"""
class VerificationService:

    def run(
        self,
        suite: str,
        trials: int,
        seed: int = 0,
        json_path: Optional[str] = None
    ) -> VerifyReport:
        results = run_suite(suite, trials=trials, seed=seed)
        report = VerifyReport(
            suite=suite,
            passed=all(r.passed for r in results),
            checks=[r.to_dict() for r in results],
        )
        logger.info(
            "suite %s: %d/%d checks passed",
            suite, sum(r.passed for r in results), len(results),
        )

        if json_path is not None:
            path = write_json(report.model_dump(mode="json"), Path(json_path))
            write_manifest(
                RunManifest(
                    command="verify",
                    config={"suite": suite, "trials": trials},
                    seeds=[seed],
                    outputs=[str(path)],
                ),
                path.parent,
            )
        return report


verification_service = VerificationService()
