import datetime

from sqlalchemy import Boolean, Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class BenchmarkRun(Base):
    __tablename__ = 'benchmark_runs'

    id = Column(Integer, primary_key=True)
    config_name = Column(String, nullable=False)
    config_hash = Column(String, nullable=False)
    seed = Column(Integer, nullable=False)
    outcome = Column(String, nullable=False)  # interface, counterexample, aborted or error
    exit_code = Column(Integer, nullable=False)

    quantified_var_count = Column(Integer, nullable=True)
    cex_count = Column(Integer, nullable=True)
    gathered_vector_count = Column(Integer, nullable=True)
    positive_vector_count = Column(Integer, nullable=True)
    time_consistent_ms = Column(Float, nullable=True)
    time_weaken_ms = Column(Float, nullable=True)

    report = Column(Text, nullable=False)
    created_at = Column(DateTime, default=datetime.datetime.now)

    specs = relationship("InferredSpec", back_populates="run", cascade="all, delete-orphan")


class InferredSpec(Base):
    __tablename__ = 'inferred_specs'

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("benchmark_runs.id"))
    function = Column(String, nullable=False)
    formula = Column(String, nullable=False)
    positive_count = Column(Integer, nullable=False)
    maximal = Column(Boolean, nullable=False, default=True)

    run = relationship("BenchmarkRun", back_populates="specs")
