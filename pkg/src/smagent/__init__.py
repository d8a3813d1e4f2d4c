"""Retail support agent built around state machines as tools.

Subpackages:
    retail   -- deterministic retail environment (data model, reads, gated mutations)
    flows    -- generic state-machine runtime plus the concrete retail flows
    query    -- LLM-powered item/order search tools with deterministic execution
    llm      -- chat-completion backends (live HTTP, scripted replay) and the output grammar
    context  -- working-memory assembly, compression, and entity enrichment
    agent    -- the per-turn reasoning loop and tool registry
    harness  -- simulated-user episodes, grading, and suite statistics
"""

__version__ = "0.1.0"
