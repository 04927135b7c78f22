"""
Mining service entry point (development server)
Run with: python main.py --port 8000 --env development
"""
import argparse
import os
import sys
import traceback

# Make app/ and topk_hui/ importable regardless of the launch directory
backend_dir = os.path.dirname(os.path.abspath(__file__))
if backend_dir not in sys.path:
    sys.path.insert(0, backend_dir)

from app import create_app
from app.config import config

DEFAULT_HOST = os.getenv("FLASK_HOST", "localhost")  # Use 0.0.0.0 in Docker
DEFAULT_PORT = int(os.getenv("FLASK_PORT", "8000"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Top-k HUI mining service')
    parser.add_argument('--host', default=DEFAULT_HOST, help='Host to bind to (default: localhost)')
    parser.add_argument('--port', type=int, default=DEFAULT_PORT, help='Port (default: 8000)')
    parser.add_argument('--env', choices=sorted(config), default=os.getenv("FLASK_ENV", "default"),
                        help='Configuration profile (default: FLASK_ENV or development)')
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        app = create_app(config[args.env])
    except Exception as e:
        print(f"\n❌ ERROR: Failed to create Flask app: {e}", file=sys.stderr)
        traceback.print_exc()
        return 1

    base = f"http://{args.host}:{args.port}/api/v1"
    print(f"\n✓ Mining service ({args.env}) on {base}")
    print(f"✓ POST {base}/mining/mine   POST {base}/mining/stats   GET {base}/health")
    print("Press Ctrl+C to stop\n")
    try:
        app.run(debug=app.config.get("DEBUG", False), host=args.host, port=args.port, use_reloader=False)
    except KeyboardInterrupt:
        print("\nServer stopped by user")
    return 0


if __name__ == '__main__':
    sys.exit(main())
