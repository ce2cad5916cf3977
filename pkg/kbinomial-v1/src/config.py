"""
Configuration management for the k-binomial toolkit
"""

import os
from typing import Dict, Any, Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_BUDGET = 20_000_000


class ToolkitConfig:
    """Configuration class for enumeration settings"""

    def __init__(self):
        # Enumeration configuration
        self.budget = int(os.getenv('KBINOM_BUDGET', str(DEFAULT_BUDGET)))
        self.max_workers = int(os.getenv('KBINOM_MAX_WORKERS', '4'))
        self.chunk_size = int(os.getenv('KBINOM_CHUNK_SIZE', '65536'))

        # Logging and progress configuration
        self.log_level = os.getenv('KBINOM_LOG_LEVEL', 'WARNING')
        self.log_dir = os.getenv('KBINOM_LOG_DIR', 'logs')
        self.progress = os.getenv('KBINOM_PROGRESS', '1').lower() not in ('0', 'false', 'no', 'off')

    def validate(self) -> bool:
        """Validate configuration settings"""
        positive_fields = [
            ('budget', self.budget),
            ('max_workers', self.max_workers),
            ('chunk_size', self.chunk_size)
        ]

        invalid_fields = [field for field, value in positive_fields if value <= 0]

        if invalid_fields:
            raise ValueError(f"Configuration values must be positive: {', '.join(invalid_fields)}")

        return True

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary"""
        return {
            'enumeration': {
                'budget': self.budget,
                'max_workers': self.max_workers,
                'chunk_size': self.chunk_size
            },
            'logging': {
                'level': self.log_level,
                'log_dir': self.log_dir,
                'progress': self.progress
            }
        }


def resolve_budget(budget: Optional[int] = None) -> int:
    """Return the explicit budget or the configured default"""
    if budget is not None:
        if budget <= 0:
            raise ValueError(f"Enumeration budget must be positive, got {budget}")
        return budget
    return ToolkitConfig().budget
