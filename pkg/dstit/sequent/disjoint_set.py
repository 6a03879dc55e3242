from typing import Generic, Hashable, Iterator, TypeVar

T = TypeVar("T", bound=Hashable)


class DisjointSet(Generic[T]):
    """Union-find over hashable elements, with union by size and path halving.

    Elements are added implicitly the first time they are looked up.
    """

    def __init__(self):
        self._data: dict[T, tuple[T, int]] = {}

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, item: T) -> bool:
        return item in self._data

    def __iter__(self) -> Iterator[tuple[T, T]]:
        for key in list(self._data.keys()):
            yield key, self.find(key)

    def copy(self) -> "DisjointSet[T]":
        clone = DisjointSet()
        clone._data = dict(self._data)
        return clone

    def add(self, x: T):
        if x not in self._data:
            self._data[x] = (x, 1)

    def find(self, x: T) -> T:
        return self._find(x)[0]

    def _find(self, x: T) -> tuple[T, int]:
        self.add(x)
        while x != self._data[x][0]:
            self._data[x] = self._data[self._data[x][0]]
            x = self._data[x][0]
        return self._data[x]

    def union(self, x: T, y: T) -> bool:
        """Merge the classes of two elements.

        Returns:
            bool: True if two distinct classes were merged.
        """
        parent_x, size_x = self._find(x)
        parent_y, size_y = self._find(y)
        if parent_x == parent_y:
            return False
        if size_x >= size_y:
            root, child = parent_x, parent_y
        else:
            root, child = parent_y, parent_x
        self._data[root] = self._data[child] = root, size_x + size_y
        return True

    def connected(self, x: T, y: T) -> bool:
        return self.find(x) == self.find(y)

    def classes(self) -> list[list[T]]:
        """Return the classes, each in insertion order, ordered by first member."""
        groups: dict[T, list[T]] = {}
        for key in list(self._data.keys()):
            groups.setdefault(self.find(key), []).append(key)
        return list(groups.values())
