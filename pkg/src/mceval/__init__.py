"""Multi-criteria LLM evaluation workbench.

Subpackages:
  ahp      - pairwise-comparison weights and consistency diagnostics
  scoring  - rating-grid aggregation and weighted composite scores
  judge    - LLM-as-judge prompt/parse/aggregate harness
  backends - replay and chat-completion judge backends
  corpus   - bibliographic corpus to instruction-pair pipeline
  service  - HTTP session API
  cli      - command-line front door
"""

__version__ = "0.1.0"
