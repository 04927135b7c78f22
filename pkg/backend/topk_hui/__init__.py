# Top-k High-Utility Itemset Mining Package
