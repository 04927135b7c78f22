from flask import Blueprint, jsonify, current_app, request
from marshmallow import ValidationError
import logging
import traceback

from topk_hui.config import get_config
from topk_hui.ingest import DatasetParseError, EmptyDatabaseError, create_dataset_source, dataset_summary
from topk_hui.miners import MinerOptions, OracleGuardError, expand_boundary_ties, run_miner
from topk_hui.strategies import MissingProfitError

from ..schemas.mining import DatasetRequestSchema, MineRequestSchema

logger = logging.getLogger(__name__)

mining_bp = Blueprint("mining", __name__)


def _error(message, status_code, **extra):
    return jsonify({"status": "error", "error": message, **extra}), status_code


def _load_request(schema):
    """Returns (data, None) or (None, error response)"""
    payload = request.get_json(silent=True)
    if payload is None:
        return None, _error("JSON body required", 400)
    try:
        data = schema.load(payload)
    except ValidationError as err:
        return None, _error("Validation failed", 400, details=err.messages)

    size = len(data["dataset"].encode("utf-8"))
    if size > current_app.config["MAX_DATASET_BYTES"]:
        return None, _error(f"Dataset exceeds {current_app.config['MAX_DATASET_BYTES']} bytes", 413)
    return data, None


def _load_database(data):
    try:
        return create_dataset_source("text", text=data["dataset"], strict=data["strict"]).load(), None
    except DatasetParseError as e:
        return None, _error(str(e), 400, line=e.line_no)


@mining_bp.route("/mine", methods=["POST"])
def mine():
    data, error = _load_request(MineRequestSchema())
    if error:
        return error
    if data["k"] > current_app.config["MAX_K"]:
        return _error(f"k exceeds {current_app.config['MAX_K']}", 400)

    db, error = _load_database(data)
    if error:
        return error

    mining_defaults = get_config()["mining"]
    try:
        opts = MinerOptions.from_tokens(
            data["algo"],
            strategies=data["strategies"],
            prune=data["prune"],
            rsd_n=data["rsd_n"] or mining_defaults["rsd_n"],
            cov_cap=data["cov_cap"] or mining_defaults["cov_cap"],
            profits=data["profits"],
            oracle_max_items=current_app.config["ORACLE_MAX_ITEMS"],
        )
        result = run_miner(data["algo"], db, data["k"], opts)
    except OracleGuardError as e:
        return _error(str(e), 422)
    except (MissingProfitError, ValueError) as e:
        return _error(str(e), 400)
    except Exception as e:
        logger.error(f"[MINE] Unexpected error: {e}")
        logger.error(traceback.format_exc())
        return _error("Internal error during mining", 500)

    topk = expand_boundary_ties(db, result) if data["boundary"] == "relaxed" else result.topk
    body = {
        "status": "success",
        "algo": result.algo,
        "k": result.k,
        "topk": [{"itemset": list(itemset), "utility": u} for itemset, u in topk],
        "delta_final": result.delta_final,
        "stats": result.stats.to_dict(),
    }
    if data["include_audit"]:
        body["audit"] = result.to_dict()["audit"]
    logger.info(f"[MINE] {result.algo} k={result.k}: {len(topk)} itemsets, delta_final={result.delta_final}")
    return jsonify(body)


@mining_bp.route("/stats", methods=["POST"])
def stats():
    data, error = _load_request(DatasetRequestSchema())
    if error:
        return error
    db, error = _load_database(data)
    if error:
        return error
    try:
        summary = dataset_summary(db)
    except EmptyDatabaseError as e:
        return _error(str(e), 400)
    return jsonify({"status": "success", **summary.to_dict()})
