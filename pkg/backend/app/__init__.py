# Top-k HUI Mining Service - Flask Backend
# Main Application Factory
from dotenv import load_dotenv
load_dotenv()
import logging

from flask import Flask, jsonify

from .config import Config
from .utils.logger import configure_logging

logger = logging.getLogger(__name__)


def register_blueprints(app: Flask) -> None:
    from .routes.common_routes import common_bp
    from .routes.mining_routes import mining_bp

    # Register more specific routes FIRST to avoid conflicts
    app.register_blueprint(mining_bp, url_prefix="/api/v1/mining")
    app.register_blueprint(common_bp, url_prefix="/api/v1")


def register_error_handlers(app: Flask) -> None:
    @app.errorhandler(404)
    def not_found(_error):
        return jsonify({"status": "error", "error": "Not found"}), 404

    @app.errorhandler(405)
    def method_not_allowed(_error):
        return jsonify({"status": "error", "error": "Method not allowed"}), 405

    @app.errorhandler(413)
    def too_large(_error):
        limit = app.config.get("MAX_DATASET_BYTES")
        return jsonify({"status": "error", "error": f"Dataset exceeds {limit} bytes"}), 413


def create_app(config_object: type[Config] | None = None) -> Flask:
    app = Flask(__name__)
    app.config.from_object(config_object or Config)
    configure_logging(app.config.get("LOG_LEVEL", "INFO"), app.config.get("MINING_LOG_LEVEL"))

    register_blueprints(app)
    register_error_handlers(app)
    logger.info(f"Mining service created ({len(list(app.url_map.iter_rules()))} routes)")
    return app
