"""Pure-numpy fallback kernels.

The batch sweeps are vectorized over frames/valuations with bit-packed
relations; the small per-object helpers are plain loops.  Results are
bit-for-bit identical to the numba backend.
"""

from __future__ import annotations

import numpy as np

from ._layout import (
    FLAG_FORWARD, FLAG_BACKWARD, FLAG_DOWNWARD, FLAG_LOCLIN,
    FLAG_MOD_REFLEXIVE, FLAG_MOD_IRREFLEXIVE,
    OP_BOT, OP_PROP, OP_AND, OP_OR, OP_IMP, OP_BOX,
    S_FRAMES, S_BACKWARD, S_BWD_COLLAPSE_VIOL, S_DOWNWARD, S_DWN_COLLAPSE_VIOL,
    S_MOD_REFL, S_MEET_TOPOLOGY_VIOL, S_CLOSURE_INDUCTION_VIOL, S_MOD_IRREFL, S_DERIV_INDUCTION_LIT_APPL,
    S_DERIV_INDUCTION_LIT_VIOL, S_LEAD_IRREFL, S_DERIV_INDUCTION_COR_VIOL, S_TRANSFER_APPL,
    S_TRANSFER_COARSE_VIOL, S_TRANSFER_DREG_VIOL, S_TRANSFER_BREG_VIOL,
    S_DWN_INCLUSION_VIOL, S_DWN_REFLEXIVE_VIOL, S_SPACE_LAW_VIOL, SUITE_SIZE,
)


def unpack_rows(mask, n):
    full = (1 << n) - 1
    return np.array([(int(mask) >> (n * i)) & full for i in range(n)], np.int64)


def pack_rows(rows):
    n = len(rows)
    mask = 0
    for i in range(n):
        mask |= int(rows[i]) << (n * i)
    return np.int64(mask)


def compose_rows(r, s):
    n = len(r)
    out = np.zeros(n, np.int64)
    for i in range(n):
        acc = 0
        for j in range(n):
            if (int(r[i]) >> j) & 1:
                acc |= int(s[j])
        out[i] = acc
    return out


def transitive_closure_rows(rows):
    n = len(rows)
    out = [int(x) for x in rows]
    for k in range(n):
        for i in range(n):
            if (out[i] >> k) & 1:
                out[i] |= out[k]
    return np.array(out, np.int64)


def reflexive_transitive_closure_rows(rows):
    n = len(rows)
    return transitive_closure_rows(np.array([int(rows[i]) | (1 << i) for i in range(n)], np.int64))


def frame_flags(pre, mod, universal_mask):
    n = len(pre)
    pre = [int(x) for x in pre]
    mod = [int(x) for x in mod]
    u_mask = int(universal_mask)
    cols_mod = [0] * n
    cols_pre = [0] * n
    for i in range(n):
        for j in range(n):
            if (mod[i] >> j) & 1:
                cols_mod[j] |= 1 << i
            if (pre[i] >> j) & 1:
                cols_pre[j] |= 1 << i
    flags = FLAG_FORWARD | FLAG_BACKWARD | FLAG_DOWNWARD | FLAG_LOCLIN
    worlds = [w for w in range(n) if (u_mask >> w) & 1]
    for w in worlds:
        for v in worlds:
            if (mod[w] >> v) & 1:
                for u in worlds:
                    if (pre[w] >> u) & 1 and pre[v] & mod[u] == 0:
                        flags &= ~FLAG_FORWARD
                    if (pre[v] >> u) & 1 and pre[w] & cols_mod[u] == 0:
                        flags &= ~FLAG_BACKWARD
            if (pre[w] >> v) & 1:
                for u in worlds:
                    if (mod[v] >> u) & 1 and mod[w] & cols_pre[u] == 0:
                        flags &= ~FLAG_DOWNWARD
                    if (pre[w] >> u) & 1 and not ((pre[v] >> u) & 1 or (pre[u] >> v) & 1):
                        flags &= ~FLAG_LOCLIN
    if all((mod[w] >> w) & 1 for w in range(n)):
        flags |= FLAG_MOD_REFLEXIVE
    if not any((mod[w] >> w) & 1 for w in range(n)):
        flags |= FLAG_MOD_IRREFLEXIVE
    return flags


def space_tables(pre, mod, lead):
    n = len(pre)
    nsub = 1 << n
    itab = np.empty(nsub, np.int64)
    dtab = np.empty(nsub, np.int64)
    etab = np.empty(nsub, np.int64)
    for a in range(nsub):
        iv = dv = ev = 0
        for w in range(n):
            bit = 1 << w
            if int(pre[w]) & ~a == 0:
                iv |= bit
            if int(mod[w]) & a != 0:
                dv |= bit
            if int(lead[w]) & ~a == 0:
                ev |= bit
        itab[a], dtab[a], etab[a] = iv, dv, ev
    return itab, dtab, etab


def _eval_vec_operator(code, propmasks, itab, dtab, etab, full):
    stack = []
    nv = propmasks.shape[1]
    for ins in code:
        op = int(ins) >> 8
        if op == OP_BOT:
            stack.append(np.zeros(nv, np.int64))
        elif op == OP_PROP:
            stack.append(propmasks[int(ins) & 255].astype(np.int64))
        elif op == OP_AND:
            b = stack.pop()
            stack[-1] = stack[-1] & b
        elif op == OP_OR:
            b = stack.pop()
            stack[-1] = stack[-1] | b
        elif op == OP_IMP:
            b = stack.pop()
            stack[-1] = itab[(full & ~stack[-1]) | b]
        elif op == OP_BOX:
            stack[-1] = etab[stack[-1]]
        else:
            stack[-1] = itab[dtab[stack[-1]]]
    return stack[0]


def _eval_vec_relational(code, propmasks, pre, mod, lead, full):
    n = len(pre)
    nv = propmasks.shape[1]
    stack = []
    for ins in code:
        op = int(ins) >> 8
        if op == OP_BOT:
            stack.append(np.zeros(nv, np.int64))
        elif op == OP_PROP:
            stack.append(propmasks[int(ins) & 255].astype(np.int64))
        elif op == OP_AND:
            b = stack.pop()
            stack[-1] = stack[-1] & b
        elif op == OP_OR:
            b = stack.pop()
            stack[-1] = stack[-1] | b
        elif op == OP_IMP:
            b = stack.pop()
            bad = stack[-1] & ~b
            r = np.zeros(nv, np.int64)
            for w in range(n):
                r |= ((int(pre[w]) & bad) == 0).astype(np.int64) << w
            stack[-1] = r
        elif op == OP_BOX:
            a = stack[-1]
            r = np.zeros(nv, np.int64)
            for w in range(n):
                r |= ((int(lead[w]) & ~a) == 0).astype(np.int64) << w
            stack[-1] = r
        else:
            a = stack[-1]
            nowit = np.zeros(nv, np.int64)
            for w in range(n):
                nowit |= ((int(mod[w]) & a) == 0).astype(np.int64) << w
            r = np.zeros(nv, np.int64)
            for w in range(n):
                r |= ((int(pre[w]) & nowit) == 0).astype(np.int64) << w
            stack[-1] = r
    return stack[0]


def bank_eval_operator(code, starts, ends, propmasks, itab, dtab, etab, full):
    nf = len(starts)
    out = np.zeros((nf, propmasks.shape[1]), np.int64)
    for fi in range(nf):
        out[fi] = _eval_vec_operator(code[starts[fi]:ends[fi]], propmasks, itab, dtab, etab, full)
    return out


def bank_eval_relational(code, starts, ends, propmasks, pre, mod, lead, full):
    nf = len(starts)
    out = np.zeros((nf, propmasks.shape[1]), np.int64)
    for fi in range(nf):
        out[fi] = _eval_vec_relational(code[starts[fi]:ends[fi]], propmasks, pre, mod, lead, full)
    return out


def first_refuting_valuation(code, opens, nprops, itab, dtab, etab, full):
    m = len(opens)
    total = m ** nprops if nprops else 1
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        pm = np.zeros((max(nprops, 1), len(idx)), np.int64)
        rem = idx.copy()
        for j in range(nprops - 1, -1, -1):
            pm[j] = opens[rem % m]
            rem //= m
        res = _eval_vec_operator(code, pm, itab, dtab, etab, full)
        bad = np.nonzero(res != full)[0]
        if len(bad):
            a = int(start + bad[0])
            missing = full & ~int(res[bad[0]])
            return a, (missing & -missing).bit_length() - 1
    return -1, -1


def _is_upset(rows, u, n):
    return all(not ((u >> w) & 1) or rows[w] & ~u == 0 for w in range(n))


def hed_loclin_scan(pre_masks, n):
    nsub = 1 << n
    viol = 0
    witness = -1
    for pmask in pre_masks:
        pre = [int(x) for x in unpack_rows(pmask, n)]
        loclin = True
        for w in range(n):
            for v in range(n):
                if not (pre[w] >> v) & 1:
                    continue
                for u in range(n):
                    if (pre[w] >> u) & 1 and not ((pre[v] >> u) & 1 or (pre[u] >> v) & 1):
                        loclin = False
        hed = True
        for s in range(nsub):
            sub = [pre[w] & s for w in range(n)]
            for u in range(nsub):
                if u & ~s != 0 or not _is_upset(sub, u, n):
                    continue
                cl = 0
                for w in range(n):
                    if (s >> w) & 1 and sub[w] & u != 0:
                        cl |= 1 << w
                if not _is_upset(sub, cl, n):
                    hed = False
        if hed != loclin:
            viol += 1
            if witness == -1:
                witness = int(pmask)
    return viol, witness


def _record(counts, wit, key, viol_vec, pmask, mod_masks):
    hits = int(viol_vec.sum())
    if hits:
        counts[key] += hits
        if wit[key, 0] == -1:
            wit[key, 0] = pmask
            wit[key, 1] = mod_masks[int(np.argmax(viol_vec))]


def frame_suite(pre_masks, mod_masks, n):
    """Vectorized twin of the numba frame sweep: one preorder at a time,
    all modal relations in parallel as bit-packed int64 vectors."""
    full = (1 << n) - 1
    nsub = 1 << n
    counts = np.zeros(SUITE_SIZE, np.int64)
    wit = np.full((SUITE_SIZE, 2), -1, np.int64)
    mod = np.asarray(mod_masks, np.int64)
    m = mod.shape[0]
    if m == 0 or len(pre_masks) == 0:
        return counts, wit

    mrows = np.stack([(mod >> (n * w)) & full for w in range(n)])
    mcols = np.zeros((n, m), np.int64)
    for i in range(n):
        for j in range(n):
            mcols[j] |= ((mrows[i] >> j) & 1) << i
    diag = sum(1 << (n * i + i) for i in range(n))
    mrefl = (mod & diag) == diag
    mirr = (mod & diag) == 0

    # mod-only tables, shape (nsub, m)
    dtab = np.zeros((nsub, m), np.int64)
    ctab_mod = np.zeros((nsub, m), np.int64)
    int_mod = np.zeros((nsub, m), np.int64)
    cd_mod = np.zeros((nsub, m), np.int64)
    ce_mod = np.zeros((nsub, m), np.int64)
    upset_mod = np.zeros((nsub, m), bool)
    for a in range(nsub):
        um = np.ones(m, bool)
        for w in range(n):
            bit = 1 << w
            in_a = (a >> w) & 1
            hits = (mrows[w] & a) != 0
            dtab[a] |= hits.astype(np.int64) << w
            ctab_mod[a] |= (hits | bool(in_a)).astype(np.int64) << w
            if in_a:
                int_mod[a] |= ((mrows[w] & ~a & full) == 0).astype(np.int64) << w
                um &= (mrows[w] & ~a & full) == 0
            cd_mod[a] |= ((mrows[w] & ~bit & a) != 0).astype(np.int64) << w
            ce_mod[a] |= ((mrows[w] & ~bit & ~a & full) == 0).astype(np.int64) << w
        upset_mod[a] = um

    for pmask in pre_masks:
        pmask = int(pmask)
        pre = [(pmask >> (n * w)) & full for w in range(n)]
        itab_pre = np.array([sum(1 << w for w in range(n) if pre[w] & ~a == 0)
                             for a in range(nsub)], np.int64)
        upset_pre = [all(not ((u >> w) & 1) or pre[w] & ~u == 0 for w in range(n))
                     for u in range(nsub)]
        counts[S_FRAMES] += m

        pm = np.zeros((n, m), np.int64)
        mp = np.zeros((n, m), np.int64)
        fwd_lhs = np.zeros((n, m), np.int64)
        fwd_rhs = np.zeros((n, m), np.int64)
        for w in range(n):
            for v in range(n):
                if (pre[w] >> v) & 1:
                    pm[w] |= mrows[v]
                    fwd_rhs[w] |= mcols[v]
                mp[w] |= ((mrows[w] >> v) & 1) * pre[v]
                fwd_lhs[w] |= ((mcols[w] >> v) & 1) * pre[v]
        lead = pm.copy()
        for k in range(n):
            for w in range(n):
                lead[w] = lead[w] | ((lead[w] >> k) & 1) * lead[k]

        bwd = np.ones(m, bool)
        dwn = np.ones(m, bool)
        fwd = np.ones(m, bool)
        lead_irr = np.ones(m, bool)
        lead_td = np.ones(m, bool)
        l54_1_eq = np.ones(m, bool)
        l54_2_eq = np.ones(m, bool)
        l54_2_incl = np.ones(m, bool)
        for w in range(n):
            bwd &= (mp[w] & ~pm[w] & full) == 0
            dwn &= (pm[w] & ~mp[w] & full) == 0
            fwd &= (fwd_lhs[w] & ~fwd_rhs[w] & full) == 0
            lead_irr &= ((lead[w] >> w) & 1) == 0
            l54_1_eq &= lead[w] == pm[w]
            l54_2_eq &= lead[w] == mp[w]
            l54_2_incl &= (lead[w] & ~mp[w] & full) == 0
        for i in range(n):
            for j in range(i + 1, n):
                lead_td &= ((lead[i] >> j) & (lead[j] >> i) & 1) == 0

        counts[S_BACKWARD] += int(bwd.sum())
        counts[S_DOWNWARD] += int(dwn.sum())
        counts[S_MOD_REFL] += int(mrefl.sum())
        counts[S_MOD_IRREFL] += int(mirr.sum())
        counts[S_LEAD_IRREFL] += int(lead_irr.sum())
        _record(counts, wit, S_BWD_COLLAPSE_VIOL, bwd & ~l54_1_eq, pmask, mod)
        _record(counts, wit, S_DWN_COLLAPSE_VIOL, dwn & ~l54_2_eq, pmask, mod)
        _record(counts, wit, S_DWN_INCLUSION_VIOL, dwn & ~l54_2_incl, pmask, mod)
        _record(counts, wit, S_DWN_REFLEXIVE_VIOL, dwn & mrefl & ~l54_2_eq, pmask, mod)

        # lead-dependent tables
        etab = np.zeros((nsub, m), np.int64)
        int_lead = np.zeros((nsub, m), np.int64)
        ce_lead = np.zeros((nsub, m), np.int64)
        upset_lead = np.zeros((nsub, m), bool)
        for a in range(nsub):
            ul = np.ones(m, bool)
            for w in range(n):
                bit = 1 << w
                inside = (lead[w] & ~a & full) == 0
                etab[a] |= inside.astype(np.int64) << w
                if (a >> w) & 1:
                    int_lead[a] |= inside.astype(np.int64) << w
                    ul &= inside
                ce_lead[a] |= ((lead[w] & ~bit & ~a & full) == 0).astype(np.int64) << w
            upset_lead[a] = ul

        laws_ok = np.ones(m, bool)
        for a in range(nsub):
            ia = int(itab_pre[a])
            ei = etab[ia]
            laws_ok &= (itab_pre[ei] == ei) & (np.take_along_axis(
                int_mod, ei[None, :], axis=0)[0] == ei)
        _record(counts, wit, S_SPACE_LAW_VIOL, ~laws_ok, pmask, mod)

        ok63 = np.ones(m, bool)
        for u in range(nsub):
            ok63 &= upset_lead[u] == (upset_mod[u] if upset_pre[u] else False)
        _record(counts, wit, S_MEET_TOPOLOGY_VIOL, mrefl & ~ok63, pmask, mod)

        ok65c = np.ones(m, bool)
        ok65d = np.ones(m, bool)
        for a in range(nsub):
            ok65c &= (dtab[a] == ctab_mod[a]) & (etab[a] == int_lead[a])
            ok65d &= (dtab[a] == cd_mod[a]) & (etab[a] == ce_lead[a])
        _record(counts, wit, S_CLOSURE_INDUCTION_VIOL, mrefl & ~ok65c, pmask, mod)
        lit_appl = mirr & lead_td
        counts[S_DERIV_INDUCTION_LIT_APPL] += int(lit_appl.sum())
        _record(counts, wit, S_DERIV_INDUCTION_LIT_VIOL, lit_appl & ~ok65d, pmask, mod)
        _record(counts, wit, S_DERIV_INDUCTION_COR_VIOL, lead_irr & ~ok65d, pmask, mod)

        appl = mrefl | mirr
        counts[S_TRANSFER_APPL] += int(appl.sum())
        ok_coarse = np.ones(m, bool)
        ok_dreg = np.ones(m, bool)
        ok_breg = np.ones(m, bool)
        for a in range(nsub):
            edop = np.where(mrefl, int_mod[a], ce_mod[a])
            ia = int(itab_pre[a])
            ebop = np.where(mrefl, int_lead[ia], ce_lead[ia])
            ok_coarse &= itab_pre[edop] == ebop
            lhs = np.where(mrefl, ctab_mod[ia], cd_mod[ia])
            ok_dreg &= lhs == itab_pre[lhs]
            edop_i = np.where(mrefl, int_mod[ia], ce_mod[ia])
            ok_breg &= edop_i == ebop
        _record(counts, wit, S_TRANSFER_COARSE_VIOL, appl & bwd & ~ok_coarse, pmask, mod)
        _record(counts, wit, S_TRANSFER_DREG_VIOL, appl & fwd & ~ok_dreg, pmask, mod)
        _record(counts, wit, S_TRANSFER_BREG_VIOL, appl & dwn & ~ok_breg, pmask, mod)
    return counts, wit
