#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Top-k High-Utility Itemset Miner
Command-line entry point: python run_mining.py mine --input data.txt --k 10 --algo khmc
"""

import os
import sys

script_dir = os.path.dirname(os.path.abspath(__file__))
if script_dir not in sys.path:
    sys.path.insert(0, script_dir)

from topk_hui.cli import main

if __name__ == "__main__":
    sys.exit(main())
