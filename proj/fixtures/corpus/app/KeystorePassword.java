package fixtures.app;

import java.io.InputStream;
import java.security.KeyStore;

// Opens the application key store with a password shipped in the source.
public class KeystorePassword {
    public KeyStore open(InputStream stream) throws Exception {
        String password = "changeit";
        char[] pw = password.toCharArray();
        KeyStore store = KeyStore.getInstance("PKCS12");
        store.load(stream, pw);
        return store;
    }
}
