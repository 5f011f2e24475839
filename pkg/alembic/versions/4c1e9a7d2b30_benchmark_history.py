"""Benchmark history

Revision ID: 4c1e9a7d2b30
Revises: 
Create Date: 2026-10-18 09:12:41.204117

"""
from typing import Sequence, Union

from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision: str = '4c1e9a7d2b30'
down_revision: Union[str, None] = None
branch_labels: Union[str, Sequence[str], None] = None
depends_on: Union[str, Sequence[str], None] = None


def upgrade() -> None:
    """Upgrade schema."""
    op.create_table('benchmark_runs',
    sa.Column('id', sa.Integer(), nullable=False),
    sa.Column('config_name', sa.String(), nullable=False),
    sa.Column('config_hash', sa.String(), nullable=False),
    sa.Column('seed', sa.Integer(), nullable=False),
    sa.Column('outcome', sa.String(), nullable=False),
    sa.Column('exit_code', sa.Integer(), nullable=False),
    sa.Column('quantified_var_count', sa.Integer(), nullable=True),
    sa.Column('cex_count', sa.Integer(), nullable=True),
    sa.Column('gathered_vector_count', sa.Integer(), nullable=True),
    sa.Column('positive_vector_count', sa.Integer(), nullable=True),
    sa.Column('time_consistent_ms', sa.Float(), nullable=True),
    sa.Column('time_weaken_ms', sa.Float(), nullable=True),
    sa.Column('report', sa.Text(), nullable=False),
    sa.Column('created_at', sa.DateTime(), nullable=True),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_table('inferred_specs',
    sa.Column('id', sa.Integer(), nullable=False),
    sa.Column('run_id', sa.Integer(), nullable=True),
    sa.Column('function', sa.String(), nullable=False),
    sa.Column('formula', sa.String(), nullable=False),
    sa.Column('positive_count', sa.Integer(), nullable=False),
    sa.Column('maximal', sa.Boolean(), nullable=False),
    sa.ForeignKeyConstraint(['run_id'], ['benchmark_runs.id'], ),
    sa.PrimaryKeyConstraint('id')
    )


def downgrade() -> None:
    """Downgrade schema."""
    op.drop_table('inferred_specs')
    op.drop_table('benchmark_runs')
