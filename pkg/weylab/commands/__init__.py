from .base_command import BaseCommand
from .egf import EgfCommand
from .exp import ExpCommand
from .expand import ExpandCommand
from .integrate import IntegrateCommand
from .normal_order import NormalOrderCommand
from .stirling import StirlingCommand

COMMANDS = {
    command.name: command
    for command in (NormalOrderCommand, StirlingCommand, EgfCommand, ExpCommand, ExpandCommand, IntegrateCommand)
}

__all__ = ["BaseCommand", "COMMANDS"]
