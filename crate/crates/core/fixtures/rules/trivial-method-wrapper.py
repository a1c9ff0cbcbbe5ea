class Store:
    def get(self, key):
        return fetch(key)
