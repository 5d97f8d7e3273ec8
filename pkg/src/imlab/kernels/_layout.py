"""Shared constants: opcode numbers, flag bits, and sweep counter layout."""

# stack-machine opcodes (instruction = opcode << 8 | argument)
OP_BOT, OP_PROP, OP_AND, OP_OR, OP_IMP, OP_BOX, OP_DIA = 0, 1, 2, 3, 4, 5, 6

# frame_flags bits
FLAG_FORWARD = 1
FLAG_BACKWARD = 2
FLAG_DOWNWARD = 4
FLAG_LOCLIN = 8
FLAG_MOD_REFLEXIVE = 16
FLAG_MOD_IRREFLEXIVE = 32

# frame_suite counter indices
S_FRAMES = 0
S_BACKWARD = 1           # backward-confluent pairs seen
S_BWD_COLLAPSE_VIOL = 2         # lead != pre;mod under backward confluence
S_DOWNWARD = 3
S_DWN_COLLAPSE_VIOL = 4         # lead != mod;pre under downward confluence
S_MOD_REFL = 5
S_MEET_TOPOLOGY_VIOL = 6           # lead topology != meet of the other two (reflexive mod)
S_CLOSURE_INDUCTION_VIOL = 7          # F_ds != closure-induced space (reflexive mod)
S_MOD_IRREFL = 8
S_DERIV_INDUCTION_LIT_APPL = 9      # irreflexive mod with T_d lead topology
S_DERIV_INDUCTION_LIT_VIOL = 10     # F_ds != derivative-induced space (literal hypothesis)
S_LEAD_IRREFL = 11
S_DERIV_INDUCTION_COR_VIOL = 12     # F_ds != derivative-induced space (irreflexive lead)
S_TRANSFER_APPL = 13          # mod reflexive or irreflexive
S_TRANSFER_COARSE_VIOL = 14   # backward confluent but not diamond-coarse
S_TRANSFER_DREG_VIOL = 15     # forward confluent but not diamond-regular
S_TRANSFER_BREG_VIOL = 16     # downward confluent but not box-regular
S_DWN_INCLUSION_VIOL = 17   # lead not within mod;pre under downward confluence
S_DWN_REFLEXIVE_VIOL = 18   # lead != mod;pre under downward confluence + reflexive mod
S_SPACE_LAW_VIOL = 19    # frame space violates a composition equality
SUITE_SIZE = 20

SUITE_NAMES = (
    "frames",
    "backward_confluent", "backward_lead_collapse_violations",
    "downward_confluent", "downward_lead_collapse_violations",
    "mod_reflexive", "meet_topology_violations", "closure_induction_violations",
    "mod_irreflexive", "derivative_induction_literal_applicable",
    "derivative_induction_literal_violations",
    "lead_irreflexive", "derivative_induction_corrected_violations",
    "regularity_transfer_applicable", "coarse_transfer_violations",
    "dregular_transfer_violations", "bregular_transfer_violations",
    "downward_lead_inclusion_violations", "downward_lead_reflexive_violations",
    "space_law_violations",
)
