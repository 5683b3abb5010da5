package fixtures.app;

import java.security.KeyStore;
import javax.net.ssl.SSLContext;
import javax.net.ssl.TrustManager;
import javax.net.ssl.TrustManagerFactory;

// Pins the TLS context to a protocol version with known downgrade attacks.
public class OutdatedTls {
    public SSLContext build(KeyStore trustStore) throws Exception {
        TrustManagerFactory factory = TrustManagerFactory.getInstance("PKIX");
        factory.init(trustStore);
        TrustManager[] managers = factory.getTrustManagers();
        SSLContext context = SSLContext.getInstance("TLSv1.1");
        context.init(null, managers, null);
        return context;
    }
}
