"""Pure-Python grounded labelling, used when the compiled kernel is absent.

Worklist form of the least-fixpoint computation: arguments with no live
attacker become IN, targets of IN arguments become OUT, an OUT argument
releases its targets' attacker counts.  Whatever is never forced is UNDEC.
"""

IN, OUT, UNDEC = 0, 1, 2


def grounded_labels(n, attacks):
    """Label arguments 0..n-1 given (attacker, target) pairs.

    Returns a list of n ints (IN/OUT/UNDEC).  Runs in O(n + m).
    """
    targets = [[] for _ in range(n)]
    pending = [0] * n  # attackers not yet labelled OUT
    for a, b in attacks:
        targets[a].append(b)
        pending[b] += 1

    labels = [UNDEC] * n
    queue = [i for i in range(n) if pending[i] == 0]
    for i in queue:
        labels[i] = IN
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        if labels[x] == IN:
            for t in targets[x]:
                if labels[t] == UNDEC:
                    labels[t] = OUT
                    queue.append(t)
        else:  # x is OUT
            for t in targets[x]:
                pending[t] -= 1
                if pending[t] == 0 and labels[t] == UNDEC:
                    labels[t] = IN
                    queue.append(t)
    return labels
