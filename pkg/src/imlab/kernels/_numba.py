"""Numba-compiled kernels: scalar bit-twiddling loops over int64 masks.

Signatures and results are identical to the numpy backend; tests assert
bit-for-bit agreement between the two.
"""

from __future__ import annotations

import numpy as np
from numba import njit

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


@njit(cache=True)
def unpack_rows(mask, n):
    full = (1 << n) - 1
    rows = np.empty(n, np.int64)
    for i in range(n):
        rows[i] = (mask >> (n * i)) & full
    return rows


@njit(cache=True)
def pack_rows(rows):
    n = rows.shape[0]
    mask = np.int64(0)
    for i in range(n):
        mask |= rows[i] << (n * i)
    return mask


@njit(cache=True)
def compose_rows(r, s):
    n = r.shape[0]
    out = np.zeros(n, np.int64)
    for i in range(n):
        acc = np.int64(0)
        for j in range(n):
            if (r[i] >> j) & 1:
                acc |= s[j]
        out[i] = acc
    return out


@njit(cache=True)
def transitive_closure_rows(rows):
    n = rows.shape[0]
    out = rows.copy()
    for k in range(n):
        for i in range(n):
            if (out[i] >> k) & 1:
                out[i] |= out[k]
    return out


@njit(cache=True)
def reflexive_transitive_closure_rows(rows):
    n = rows.shape[0]
    out = rows.copy()
    for i in range(n):
        out[i] |= np.int64(1) << i
    return transitive_closure_rows(out)


@njit(cache=True)
def frame_flags(pre, mod, universal_mask):
    """Confluence/shape flags; universal quantifiers range over universal_mask."""
    n = pre.shape[0]
    cols_mod = np.zeros(n, np.int64)
    cols_pre = np.zeros(n, np.int64)
    for i in range(n):
        for j in range(n):
            if (mod[i] >> j) & 1:
                cols_mod[j] |= np.int64(1) << i
            if (pre[i] >> j) & 1:
                cols_pre[j] |= np.int64(1) << i
    flags = FLAG_FORWARD | FLAG_BACKWARD | FLAG_DOWNWARD | FLAG_LOCLIN
    for w in range(n):
        if not (universal_mask >> w) & 1:
            continue
        for v in range(n):
            if not (universal_mask >> v) & 1:
                continue
            if (mod[w] >> v) & 1:
                for u in range(n):
                    if not (universal_mask >> u) & 1:
                        continue
                    # forward: w mod v, w pre u  =>  exists s: v pre s, u mod s
                    if (pre[w] >> u) & 1 and pre[v] & mod[u] == 0:
                        flags &= ~FLAG_FORWARD
                    # backward: w mod v pre u  =>  exists s: w pre s mod u
                    if (pre[v] >> u) & 1 and pre[w] & cols_mod[u] == 0:
                        flags &= ~FLAG_BACKWARD
            if (pre[w] >> v) & 1:
                for u in range(n):
                    if not (universal_mask >> u) & 1:
                        continue
                    # downward: w pre v mod u  =>  exists s: w mod s pre u
                    if (mod[v] >> u) & 1 and mod[w] & cols_pre[u] == 0:
                        flags &= ~FLAG_DOWNWARD
                    # locally linear: w pre v, w pre u  =>  v,u comparable
                    if (pre[w] >> u) & 1:
                        if not ((pre[v] >> u) & 1 or (pre[u] >> v) & 1):
                            flags &= ~FLAG_LOCLIN
    refl = True
    irrefl = True
    for w in range(n):
        if (mod[w] >> w) & 1:
            irrefl = False
        else:
            refl = False
    if refl:
        flags |= FLAG_MOD_REFLEXIVE
    if irrefl:
        flags |= FLAG_MOD_IRREFLEXIVE
    return flags


@njit(cache=True)
def space_tables(pre, mod, lead):
    """F_ds operator tables: up-set interior, modal derivative, lead integral."""
    n = pre.shape[0]
    nsub = 1 << n
    itab = np.empty(nsub, np.int64)
    dtab = np.empty(nsub, np.int64)
    etab = np.empty(nsub, np.int64)
    for a in range(nsub):
        iv = np.int64(0)
        dv = np.int64(0)
        ev = np.int64(0)
        for w in range(n):
            bit = np.int64(1) << w
            if pre[w] & ~a == 0:
                iv |= bit
            if mod[w] & a != 0:
                dv |= bit
            if lead[w] & ~a == 0:
                ev |= bit
        itab[a] = iv
        dtab[a] = dv
        etab[a] = ev
    return itab, dtab, etab


@njit(cache=True)
def bank_eval_operator(code, starts, ends, propmasks, itab, dtab, etab, full):
    nf = starts.shape[0]
    nv = propmasks.shape[1]
    out = np.zeros((nf, nv), np.int64)
    stack = np.zeros(code.shape[0] + 1, np.int64)
    for v in range(nv):
        for fi in range(nf):
            sp = 0
            for pc in range(starts[fi], ends[fi]):
                ins = code[pc]
                op = ins >> 8
                if op == OP_BOT:
                    stack[sp] = 0
                    sp += 1
                elif op == OP_PROP:
                    stack[sp] = propmasks[ins & 255, v]
                    sp += 1
                elif op == OP_AND:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] & stack[sp]
                elif op == OP_OR:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] | stack[sp]
                elif op == OP_IMP:
                    sp -= 1
                    stack[sp - 1] = itab[(full & ~stack[sp - 1]) | stack[sp]]
                elif op == OP_BOX:
                    stack[sp - 1] = etab[stack[sp - 1]]
                else:
                    stack[sp - 1] = itab[dtab[stack[sp - 1]]]
            out[fi, v] = stack[0]
    return out


@njit(cache=True)
def bank_eval_relational(code, starts, ends, propmasks, pre, mod, lead, full):
    n = pre.shape[0]
    nf = starts.shape[0]
    nv = propmasks.shape[1]
    out = np.zeros((nf, nv), np.int64)
    stack = np.zeros(code.shape[0] + 1, np.int64)
    for v in range(nv):
        for fi in range(nf):
            sp = 0
            for pc in range(starts[fi], ends[fi]):
                ins = code[pc]
                op = ins >> 8
                if op == OP_BOT:
                    stack[sp] = 0
                    sp += 1
                elif op == OP_PROP:
                    stack[sp] = propmasks[ins & 255, v]
                    sp += 1
                elif op == OP_AND:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] & stack[sp]
                elif op == OP_OR:
                    sp -= 1
                    stack[sp - 1] = stack[sp - 1] | stack[sp]
                elif op == OP_IMP:
                    sp -= 1
                    bad = stack[sp - 1] & ~stack[sp]
                    r = np.int64(0)
                    for w in range(n):
                        if pre[w] & bad == 0:
                            r |= np.int64(1) << w
                    stack[sp - 1] = r
                elif op == OP_BOX:
                    a = stack[sp - 1]
                    r = np.int64(0)
                    for w in range(n):
                        if lead[w] & ~a == 0:
                            r |= np.int64(1) << w
                    stack[sp - 1] = r
                else:
                    a = stack[sp - 1]
                    nowit = np.int64(0)
                    for w in range(n):
                        if mod[w] & a == 0:
                            nowit |= np.int64(1) << w
                    r = np.int64(0)
                    for w in range(n):
                        if pre[w] & nowit == 0:
                            r |= np.int64(1) << w
                    stack[sp - 1] = r
            out[fi, v] = stack[0]
    return out


@njit(cache=True)
def first_refuting_valuation(code, opens, nprops, itab, dtab, etab, full):
    """Scan open-set valuations in lexicographic order (first proposition most
    significant, opens ascending); return (assignment index, least refuted
    world) or (-1, -1)."""
    m = opens.shape[0]
    total = np.int64(1)
    for _ in range(nprops):
        total *= m
    propmasks = np.zeros(nprops, np.int64)
    stack = np.zeros(code.shape[0] + 1, np.int64)
    for a in range(total):
        rem = a
        for j in range(nprops - 1, -1, -1):
            propmasks[j] = opens[rem % m]
            rem //= m
        sp = 0
        for pc in range(code.shape[0]):
            ins = code[pc]
            op = ins >> 8
            if op == OP_BOT:
                stack[sp] = 0
                sp += 1
            elif op == OP_PROP:
                stack[sp] = propmasks[ins & 255]
                sp += 1
            elif op == OP_AND:
                sp -= 1
                stack[sp - 1] = stack[sp - 1] & stack[sp]
            elif op == OP_OR:
                sp -= 1
                stack[sp - 1] = stack[sp - 1] | stack[sp]
            elif op == OP_IMP:
                sp -= 1
                stack[sp - 1] = itab[(full & ~stack[sp - 1]) | stack[sp]]
            elif op == OP_BOX:
                stack[sp - 1] = etab[stack[sp - 1]]
            else:
                stack[sp - 1] = itab[dtab[stack[sp - 1]]]
        res = stack[0]
        if res != full:
            missing = full & ~res
            world = np.int64(0)
            while not (missing >> world) & 1:
                world += 1
            return a, world
    return np.int64(-1), np.int64(-1)


@njit(cache=True)
def _is_upset(rows, u, n):
    for w in range(n):
        if (u >> w) & 1 and rows[w] & ~u != 0:
            return False
    return True


@njit(cache=True)
def hed_loclin_scan(pre_masks, n):
    """Check, per preorder, that the up-set topology is hereditarily
    extremally disconnected exactly when the preorder is locally linear.
    Returns (violation count, first violating preorder mask)."""
    full = (1 << n) - 1
    nsub = 1 << n
    viol = np.int64(0)
    witness = np.int64(-1)
    for pi in range(pre_masks.shape[0]):
        pre = unpack_rows(pre_masks[pi], n)
        loclin = True
        for w in range(n):
            for v in range(n):
                if not (pre[w] >> v) & 1:
                    continue
                for u in range(n):
                    if (pre[w] >> u) & 1:
                        if not ((pre[v] >> u) & 1 or (pre[u] >> v) & 1):
                            loclin = False
        hed = True
        sub = np.zeros(n, np.int64)
        for s in range(nsub):
            for w in range(n):
                sub[w] = pre[w] & s
            for u in range(nsub):
                if u & ~s != 0:
                    continue
                if not _is_upset(sub, u, n):
                    continue
                cl = np.int64(0)
                for w in range(n):
                    if (s >> w) & 1 and sub[w] & u != 0:
                        cl |= np.int64(1) << w
                if not _is_upset(sub, cl, n):
                    hed = False
        if hed != loclin:
            viol += 1
            if witness == -1:
                witness = pre_masks[pi]
    return viol, witness


@njit(cache=True)
def frame_suite(pre_masks, mod_masks, n):
    """Exhaustive law sweep over all (preorder, transitive relation) pairs.

    Per pair, checks the lead-relation collapses under backward/downward
    confluence, the meet-topology identity under reflexive modality, the
    closure/derivative induction equalities, and the confluence-to-regularity
    transfers.  Returns (counters, first-violation witness masks).
    """
    full = (1 << n) - 1
    nsub = 1 << n
    counts = np.zeros(SUITE_SIZE, np.int64)
    wit = np.full((SUITE_SIZE, 2), -1, np.int64)

    itab_pre = np.empty(nsub, np.int64)
    dtab = np.empty(nsub, np.int64)
    etab = np.empty(nsub, np.int64)
    ctab_mod = np.empty(nsub, np.int64)
    int_mod = np.empty(nsub, np.int64)
    int_lead = np.empty(nsub, np.int64)
    cd_mod = np.empty(nsub, np.int64)
    ce_mod = np.empty(nsub, np.int64)
    ce_lead = np.empty(nsub, np.int64)

    for pi in range(pre_masks.shape[0]):
        pmask = pre_masks[pi]
        pre = unpack_rows(pmask, n)
        for a in range(nsub):
            iv = np.int64(0)
            for w in range(n):
                if pre[w] & ~a == 0:
                    iv |= np.int64(1) << w
            itab_pre[a] = iv
        for mi in range(mod_masks.shape[0]):
            mmask = mod_masks[mi]
            mod = unpack_rows(mmask, n)
            counts[S_FRAMES] += 1
            pm = compose_rows(pre, mod)
            mp = compose_rows(mod, pre)
            lead = transitive_closure_rows(pm)
            flags = frame_flags(pre, mod, full)
            fwd = flags & FLAG_FORWARD != 0
            bwd = flags & FLAG_BACKWARD != 0
            dwn = flags & FLAG_DOWNWARD != 0
            mrefl = flags & FLAG_MOD_REFLEXIVE != 0
            mirr = flags & FLAG_MOD_IRREFLEXIVE != 0
            lead_irr = True
            for w in range(n):
                if (lead[w] >> w) & 1:
                    lead_irr = False
            lead_td = True
            for i in range(n):
                for j in range(i + 1, n):
                    if (lead[i] >> j) & 1 and (lead[j] >> i) & 1:
                        lead_td = False

            if bwd:
                counts[S_BACKWARD] += 1
                same = True
                for w in range(n):
                    if lead[w] != pm[w]:
                        same = False
                if not same:
                    counts[S_BWD_COLLAPSE_VIOL] += 1
                    if wit[S_BWD_COLLAPSE_VIOL, 0] == -1:
                        wit[S_BWD_COLLAPSE_VIOL, 0] = pmask
                        wit[S_BWD_COLLAPSE_VIOL, 1] = mmask
            if dwn:
                counts[S_DOWNWARD] += 1
                same = True
                included = True
                for w in range(n):
                    if lead[w] != mp[w]:
                        same = False
                    if lead[w] & ~mp[w] != 0:
                        included = False
                if not same:
                    counts[S_DWN_COLLAPSE_VIOL] += 1
                    if wit[S_DWN_COLLAPSE_VIOL, 0] == -1:
                        wit[S_DWN_COLLAPSE_VIOL, 0] = pmask
                        wit[S_DWN_COLLAPSE_VIOL, 1] = mmask
                if not included:
                    counts[S_DWN_INCLUSION_VIOL] += 1
                    if wit[S_DWN_INCLUSION_VIOL, 0] == -1:
                        wit[S_DWN_INCLUSION_VIOL, 0] = pmask
                        wit[S_DWN_INCLUSION_VIOL, 1] = mmask
                if mrefl and not same:
                    counts[S_DWN_REFLEXIVE_VIOL] += 1
                    if wit[S_DWN_REFLEXIVE_VIOL, 0] == -1:
                        wit[S_DWN_REFLEXIVE_VIOL, 0] = pmask
                        wit[S_DWN_REFLEXIVE_VIOL, 1] = mmask

            for a in range(nsub):
                dv = np.int64(0)
                ev = np.int64(0)
                cv = np.int64(0)
                imv = np.int64(0)
                ilv = np.int64(0)
                cdv = np.int64(0)
                cev = np.int64(0)
                celv = np.int64(0)
                for w in range(n):
                    bit = np.int64(1) << w
                    if mod[w] & a != 0:
                        dv |= bit
                    if lead[w] & ~a == 0:
                        ev |= bit
                    if (a >> w) & 1 or mod[w] & a != 0:
                        cv |= bit
                    if (a >> w) & 1 and mod[w] & ~a == 0:
                        imv |= bit
                    if (a >> w) & 1 and lead[w] & ~a == 0:
                        ilv |= bit
                    if mod[w] & ~bit & a != 0:
                        cdv |= bit
                    if mod[w] & ~bit & ~a == 0:
                        cev |= bit
                    if lead[w] & ~bit & ~a == 0:
                        celv |= bit
                dtab[a] = dv
                etab[a] = ev
                ctab_mod[a] = cv
                int_mod[a] = imv
                int_lead[a] = ilv
                cd_mod[a] = cdv
                ce_mod[a] = cev
                ce_lead[a] = celv

            # frame-space composition equalities: the box integral of an
            # arrow-open set is arrow-open and open in the diamond topology
            laws_ok = True
            for a in range(nsub):
                ei = etab[itab_pre[a]]
                if ei != itab_pre[ei] or ei != int_mod[ei]:
                    laws_ok = False
            if not laws_ok:
                counts[S_SPACE_LAW_VIOL] += 1
                if wit[S_SPACE_LAW_VIOL, 0] == -1:
                    wit[S_SPACE_LAW_VIOL, 0] = pmask
                    wit[S_SPACE_LAW_VIOL, 1] = mmask

            if mrefl:
                counts[S_MOD_REFL] += 1
                ok63 = True
                for u in range(nsub):
                    if _is_upset(lead, u, n) != (_is_upset(pre, u, n) and _is_upset(mod, u, n)):
                        ok63 = False
                if not ok63:
                    counts[S_MEET_TOPOLOGY_VIOL] += 1
                    if wit[S_MEET_TOPOLOGY_VIOL, 0] == -1:
                        wit[S_MEET_TOPOLOGY_VIOL, 0] = pmask
                        wit[S_MEET_TOPOLOGY_VIOL, 1] = mmask
                ok65 = True
                for a in range(nsub):
                    if dtab[a] != ctab_mod[a] or etab[a] != int_lead[a]:
                        ok65 = False
                if not ok65:
                    counts[S_CLOSURE_INDUCTION_VIOL] += 1
                    if wit[S_CLOSURE_INDUCTION_VIOL, 0] == -1:
                        wit[S_CLOSURE_INDUCTION_VIOL, 0] = pmask
                        wit[S_CLOSURE_INDUCTION_VIOL, 1] = mmask

            if mirr:
                counts[S_MOD_IRREFL] += 1
                if lead_td:
                    counts[S_DERIV_INDUCTION_LIT_APPL] += 1
                    ok = True
                    for a in range(nsub):
                        if dtab[a] != cd_mod[a] or etab[a] != ce_lead[a]:
                            ok = False
                    if not ok:
                        counts[S_DERIV_INDUCTION_LIT_VIOL] += 1
                        if wit[S_DERIV_INDUCTION_LIT_VIOL, 0] == -1:
                            wit[S_DERIV_INDUCTION_LIT_VIOL, 0] = pmask
                            wit[S_DERIV_INDUCTION_LIT_VIOL, 1] = mmask
            if lead_irr:
                counts[S_LEAD_IRREFL] += 1
                ok = True
                for a in range(nsub):
                    if dtab[a] != cd_mod[a] or etab[a] != ce_lead[a]:
                        ok = False
                if not ok:
                    counts[S_DERIV_INDUCTION_COR_VIOL] += 1
                    if wit[S_DERIV_INDUCTION_COR_VIOL, 0] == -1:
                        wit[S_DERIV_INDUCTION_COR_VIOL, 0] = pmask
                        wit[S_DERIV_INDUCTION_COR_VIOL, 1] = mmask

            if mrefl or mirr:
                counts[S_TRANSFER_APPL] += 1
                if bwd:
                    ok = True
                    for a in range(nsub):
                        edop = int_mod[a] if mrefl else ce_mod[a]
                        ia = itab_pre[a]
                        ebop = int_lead[ia] if mrefl else ce_lead[ia]
                        if itab_pre[edop] != ebop:
                            ok = False
                    if not ok:
                        counts[S_TRANSFER_COARSE_VIOL] += 1
                        if wit[S_TRANSFER_COARSE_VIOL, 0] == -1:
                            wit[S_TRANSFER_COARSE_VIOL, 0] = pmask
                            wit[S_TRANSFER_COARSE_VIOL, 1] = mmask
                if fwd:
                    ok = True
                    for a in range(nsub):
                        ia = itab_pre[a]
                        lhs = ctab_mod[ia] if mrefl else cd_mod[ia]
                        if lhs != itab_pre[lhs]:
                            ok = False
                    if not ok:
                        counts[S_TRANSFER_DREG_VIOL] += 1
                        if wit[S_TRANSFER_DREG_VIOL, 0] == -1:
                            wit[S_TRANSFER_DREG_VIOL, 0] = pmask
                            wit[S_TRANSFER_DREG_VIOL, 1] = mmask
                if dwn:
                    ok = True
                    for a in range(nsub):
                        ia = itab_pre[a]
                        edop = int_mod[ia] if mrefl else ce_mod[ia]
                        ebop = int_lead[ia] if mrefl else ce_lead[ia]
                        if edop != ebop:
                            ok = False
                    if not ok:
                        counts[S_TRANSFER_BREG_VIOL] += 1
                        if wit[S_TRANSFER_BREG_VIOL, 0] == -1:
                            wit[S_TRANSFER_BREG_VIOL, 0] = pmask
                            wit[S_TRANSFER_BREG_VIOL, 1] = mmask
    return counts, wit
